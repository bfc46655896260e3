"""High-throughput sampling kernels with numba and pure-numpy backends.

Each kernel draws many compositions at once and returns them as integer
binary codes (MSB = first digit).  The numba backend JIT-compiles the
per-draw loops; the fallback backend uses vectorised numpy where possible.
Set ``COMPSTRUCT_NO_NUMBA=1`` to force the fallback.  Both backends are
deterministic per seed but do not share random streams.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("COMPSTRUCT_NO_NUMBA", "") not in ("", "0")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap

USE_NUMBA = HAVE_NUMBA and not _DISABLED


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"


def _maybe_jit(fn):
    return njit(cache=True)(fn) if USE_NUMBA else fn


# ---------------------------------------------------------------------------
# loop kernels (JIT-compiled under the numba backend)


def _ewens_loop(theta, n, draws, seed):
    np.random.seed(seed)
    out = np.empty(draws, np.int64)
    for d in range(draws):
        code = 1
        for j in range(2, n + 1):
            code = code << 1
            if np.random.random() < theta / (j + theta - 1.0):
                code |= 1
        out[d] = code
    return out


def _renewal_loop(cdf, n, draws, seed):
    # cdf[r-1] = P(X <= r), r = 1..n; u beyond cdf[-1] means the next renewal
    # falls outside the first n digits
    np.random.seed(seed)
    out = np.empty(draws, np.int64)
    for d in range(draws):
        code = np.int64(1) << (n - 1)
        cur = 1
        while cur < n:
            u = np.random.random()
            x = 1
            while x <= n and u > cdf[x - 1]:
                x += 1
            cur += x
            if cur <= n:
                code |= np.int64(1) << (n - cur)
        out[d] = code
    return out


def _markov_loop(q_cdf, qstar_cdf, n, draws, seed):
    # q_cdf[m-1, r-1] = sum_{r' <= r} q(m:r'); qstar_cdf is the length-n row
    # of cumulative q*(n:.)
    np.random.seed(seed)
    out = np.empty(draws, np.int64)
    for d in range(draws):
        code = np.int64(0)
        m = n
        u = np.random.random()
        r = 1
        while r < m and u > qstar_cdf[r - 1]:
            r += 1
        code |= np.int64(1) << (n - (m - r + 1))
        m -= r
        while m > 0:
            u = np.random.random()
            r = 1
            while r < m and u > q_cdf[m - 1, r - 1]:
                r += 1
            code |= np.int64(1) << (n - (m - r + 1))
            m -= r
        out[d] = code
    return out


def _uniform_set_loop(theta, n, draws, seed):
    # Theorem-1 style construction for the scale-invariant Poisson set:
    # uniforms map to depths e = -log u; the interval index of depth t is the
    # number of Poisson(theta) arrivals below t, simulated via increments.
    np.random.seed(seed)
    out = np.empty(draws, np.int64)
    depths = np.empty(n)
    idx = np.empty(n, np.int64)
    for d in range(draws):
        for i in range(n):
            depths[i] = -np.log(np.random.random())
        e = np.sort(depths)
        c = 0
        prev = 0.0
        for j in range(n):
            c += np.random.poisson(theta * (e[j] - prev))
            idx[j] = c
            prev = e[j]
        # left-to-right order is descending depth; a 1 starts each new box
        code = np.int64(0)
        pos = 0
        for j in range(n - 1, -1, -1):
            if j == n - 1 or idx[j] != idx[j + 1]:
                code |= np.int64(1) << (n - 1 - pos)
            pos += 1
        out[d] = code
    return out


def _poisson_set_loop(theta, n, draws, seed):
    # Theorem-2 style construction: xi_j = 1 iff the rate-theta line process
    # has a point in [log eps_{j-1}, log eps_j]; atoms are generated lazily
    # left to right using the memoryless property.
    np.random.seed(seed)
    out = np.empty(draws, np.int64)
    for d in range(draws):
        eps = 0.0
        code = np.int64(1) << (n - 1)
        eps += -np.log(np.random.random())
        t = np.log(eps) - np.log(np.random.random()) / theta
        for j in range(2, n + 1):
            eps += -np.log(np.random.random())
            b = np.log(eps)
            if t <= b:
                code |= np.int64(1) << (n - j)
                while t <= b:
                    t += -np.log(np.random.random()) / theta
        out[d] = code
    return out


def _arrange_loop(parts, n, tau, seed):
    # parts: (draws, kmax) zero-padded partition parts; each draw is arranged
    # right to left: a size-biased pick first, then the deletion kernel with
    # per-part weight (S - r) tau + r (1 - tau) on the remainder of size S
    np.random.seed(seed)
    draws, kmax = parts.shape
    out = np.empty(draws, np.int64)
    work = np.empty(kmax, np.int64)
    for d in range(draws):
        k = 0
        for i in range(kmax):
            if parts[d, i] > 0:
                work[k] = parts[d, i]
                k += 1
        s = n
        code = np.int64(0)
        first = True
        while k > 0:
            total = 0.0
            for i in range(k):
                r = work[i]
                if first:
                    total += r
                else:
                    total += (s - r) * tau + r * (1.0 - tau)
            u = np.random.random() * total
            acc = 0.0
            pick = k - 1
            for i in range(k):
                r = work[i]
                acc += r if first else (s - r) * tau + r * (1.0 - tau)
                if u <= acc:
                    pick = i
                    break
            r = work[pick]
            code |= np.int64(1) << (n - (s - r + 1))
            s -= r
            work[pick] = work[k - 1]
            k -= 1
            first = False
        out[d] = code
    return out


_ewens_jit = _maybe_jit(_ewens_loop)
_renewal_jit = _maybe_jit(_renewal_loop)
_markov_jit = _maybe_jit(_markov_loop)
_uniform_set_jit = _maybe_jit(_uniform_set_loop)
_poisson_set_jit = _maybe_jit(_poisson_set_loop)
_arrange_jit = _maybe_jit(_arrange_loop)


# ---------------------------------------------------------------------------
# vectorised numpy fallbacks


def _bits_to_codes(bits):
    n = bits.shape[1]
    powers = (np.int64(1) << np.arange(n - 1, -1, -1)).astype(np.int64)
    return bits.astype(np.int64) @ powers


def _ewens_numpy(theta, n, draws, seed):
    rng = np.random.default_rng(seed)
    bits = np.ones((draws, n), dtype=np.int64)
    if n > 1:
        js = np.arange(2, n + 1, dtype=float)
        bits[:, 1:] = rng.random((draws, n - 1)) < theta / (js + theta - 1.0)
    return _bits_to_codes(bits)


def _renewal_numpy(cdf, n, draws, seed):
    rng = np.random.default_rng(seed)
    codes = np.full(draws, np.int64(1) << (n - 1), dtype=np.int64)
    cur = np.ones(draws, dtype=np.int64)
    active = cur < n
    while active.any():
        u = rng.random(active.sum())
        x = np.searchsorted(cdf, u, side="left") + 1
        cur_active = cur[active] + x
        hit = cur_active <= n
        idx = np.flatnonzero(active)
        codes[idx[hit]] |= np.int64(1) << (n - cur_active[hit])
        cur[idx] = cur_active
        active = cur < n
    return codes


def _markov_numpy(q_cdf, qstar_cdf, n, draws, seed):
    rng = np.random.default_rng(seed)
    codes = np.zeros(draws, dtype=np.int64)
    u = rng.random(draws)
    r = np.searchsorted(qstar_cdf[:n], u, side="left").astype(np.int64) + 1
    np.minimum(r, n, out=r)
    m = np.full(draws, n, dtype=np.int64)
    codes |= np.int64(1) << (n - (m - r + 1))
    m -= r
    while (m > 0).any():
        act = np.flatnonzero(m > 0)
        u = rng.random(act.size)
        rows = q_cdf[m[act] - 1]
        r = (u[:, None] > rows).sum(axis=1).astype(np.int64) + 1
        np.minimum(r, m[act], out=r)
        codes[act] |= np.int64(1) << (n - (m[act] - r + 1))
        m[act] -= r
    return codes


def _uniform_set_numpy(theta, n, draws, seed):
    rng = np.random.default_rng(seed)
    e = np.sort(rng.exponential(size=(draws, n)), axis=1)
    diffs = np.diff(np.concatenate([np.zeros((draws, 1)), e], axis=1), axis=1)
    idx = rng.poisson(theta * diffs).cumsum(axis=1)
    desc = idx[:, ::-1]
    bits = np.ones((draws, n), dtype=np.int64)
    bits[:, 1:] = desc[:, 1:] != desc[:, :-1]
    return _bits_to_codes(bits)


def _poisson_set_numpy(theta, n, draws, seed):
    # presence of line-process points in the disjoint windows
    # [log eps_{j-1}, log eps_j] is independent Bernoulli given the arrivals
    rng = np.random.default_rng(seed)
    eps = rng.exponential(size=(draws, n)).cumsum(axis=1)
    bits = np.ones((draws, n), dtype=np.int64)
    if n > 1:
        p = 1.0 - (eps[:, :-1] / eps[:, 1:]) ** theta
        bits[:, 1:] = rng.random((draws, n - 1)) < p
    return _bits_to_codes(bits)


# ---------------------------------------------------------------------------
# dispatchers


def ewens_string_codes(theta: float, n: int, draws: int, seed: int):
    if USE_NUMBA:
        return _ewens_jit(float(theta), n, draws, seed)
    return _ewens_numpy(float(theta), n, draws, seed)


def renewal_string_codes(cdf, n: int, draws: int, seed: int):
    cdf = np.asarray(cdf, dtype=float)
    if USE_NUMBA:
        return _renewal_jit(cdf, n, draws, seed)
    return _renewal_numpy(cdf, n, draws, seed)


def markov_chain_codes(q_cdf, qstar_cdf, n: int, draws: int, seed: int):
    q_cdf = np.asarray(q_cdf, dtype=float)
    qstar_cdf = np.asarray(qstar_cdf, dtype=float)
    if USE_NUMBA:
        return _markov_jit(q_cdf, qstar_cdf, n, draws, seed)
    return _markov_numpy(q_cdf, qstar_cdf, n, draws, seed)


def uniform_set_codes(theta: float, n: int, draws: int, seed: int):
    if USE_NUMBA:
        return _uniform_set_jit(float(theta), n, draws, seed)
    return _uniform_set_numpy(float(theta), n, draws, seed)


def poisson_set_codes(theta: float, n: int, draws: int, seed: int):
    if USE_NUMBA:
        return _poisson_set_jit(float(theta), n, draws, seed)
    return _poisson_set_numpy(float(theta), n, draws, seed)


def arrangement_codes(parts, n: int, tau: float, seed: int):
    parts = np.ascontiguousarray(parts, dtype=np.int64)
    return _arrange_jit(parts, n, float(tau), seed)
