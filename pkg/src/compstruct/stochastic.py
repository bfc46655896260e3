"""Randomised constructions: string samplers, decreasing-chain sampling,
stick-breaking, scale-invariant Poisson sets, the two uniform/Poisson
sampling constructions, fragmentation, and the size-biased arrangement
algorithm.

Single-draw operations work on explicit lazy objects (interval partitions,
atom sets) and are convenient for inspection; the ``batch_*`` functions
dispatch to the compiled kernels in :mod:`compstruct._kernels` for
high-throughput Monte Carlo and return integer composition codes.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

import numpy as np

from . import _kernels
from .composition import Composition, Partition, enumerate_partitions
from .laws import Cpf, DecrementMatrixPair, partition_law
from .ratmath import factorial, rising

__all__ = [
    "RngStream",
    "size_biased_pick",
    "sample_bernoulli_string",
    "sample_renewal_string",
    "sample_markov_composition",
    "sample_gem",
    "ScaleInvariantSet",
    "IntervalPartitionSample",
    "sample_scale_invariant_partition",
    "uniform_sampling_composition",
    "poisson_sampling_composition",
    "fragment_sample",
    "fragment_cpf",
    "arrange_partition",
    "renewal_spacing_cdf",
    "batch_ewens_strings",
    "batch_renewal_strings",
    "batch_markov_compositions",
    "batch_uniform_construction",
    "batch_poisson_construction",
    "batch_arrangements",
    "sample_partition_batch",
    "codes_to_counts",
]


@dataclass(frozen=True)
class RngStream:
    """Seeded random source; distinct stream ids give independent streams."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.default_rng(ss)

    def kernel_seed(self, salt: int = 0) -> int:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream, salt))
        return int(ss.generate_state(1)[0])


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng)}")


def size_biased_pick(weights: Sequence, rng) -> int:
    """0-based index j drawn with probability weights[j] / sum(weights)."""
    total = float(sum(weights))
    if total <= 0:
        raise ValueError("weights must have positive total")
    u = _as_rng(rng).random() * total
    acc = 0.0
    for i, w in enumerate(weights):
        acc += float(w)
        if u <= acc:
            return i
    return len(weights) - 1


# ---------------------------------------------------------------------------
# string samplers


def sample_bernoulli_string(theta, n: int, rng) -> Composition:
    """Independent digits with P(xi_j = 1) = theta/(j+theta-1); xi_1 = 1."""
    if not theta > 0:
        raise ValueError("theta must be positive")
    g = _as_rng(rng)
    th = float(theta)
    bits = ["1"]
    for j in range(2, n + 1):
        bits.append("1" if g.random() < th / (j + th - 1) else "0")
    return Composition.from_binary("".join(bits))


def renewal_spacing_cdf(alpha, n: int) -> np.ndarray:
    """cdf[r-1] = P(X <= r) for the renewal spacing P(X=r) = alpha(1-alpha)_{r-1}/r!."""
    probs = [float(alpha * rising(1 - alpha, r - 1)) / factorial(r)
             for r in range(1, n + 1)]
    return np.cumsum(probs)


def sample_renewal_string(alpha, n: int, rng) -> Composition:
    """1s at the renewal times R_k = 1 + X_1 + ... + X_k, truncated at n."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must be in (0,1)")
    g = _as_rng(rng)
    cdf = renewal_spacing_cdf(alpha, n)
    bits = ["0"] * n
    bits[0] = "1"
    cur = 1
    while cur < n:
        x = int(np.searchsorted(cdf, g.random(), side="left")) + 1
        cur += x
        if cur <= n:
            bits[cur - 1] = "1"
    return Composition.from_binary("".join(bits))


def sample_markov_composition(dm: DecrementMatrixPair, n: int, rng) -> Composition:
    """Exact product-formula sampler: last part from q*(n:.), then q(rem:.)."""
    g = _as_rng(rng)
    parts = []
    row = [float(v) for v in dm.qstar.row(n)]
    _check_row(row, dm.qstar.name, n)
    r = _draw_from_row(row, g)
    parts.append(r)
    m = n - r
    while m > 0:
        row = [float(v) for v in dm.q.row(m)]
        _check_row(row, dm.q.name, m)
        r = _draw_from_row(row, g)
        parts.append(r)
        m -= r
    return Composition(tuple(reversed(parts)))


def _check_row(row, name, n):
    if abs(sum(row) - 1.0) > 1e-9:
        raise ValueError(f"{name} row {n} is not normalised: sum = {sum(row)}")


def _draw_from_row(row, g) -> int:
    u = g.random()
    acc = 0.0
    for r, p in enumerate(row, start=1):
        acc += p
        if u <= acc:
            return r
    return len(row)


def sample_gem(alpha, theta, k: int, rng) -> list:
    """First k size-biased frequencies by stick-breaking.

    W_i ~ Beta(1-alpha, theta + i*alpha), the standard two-parameter
    residual-allocation indexing.
    """
    if not (0 <= alpha < 1 and theta > -alpha):
        raise ValueError(f"need 0 <= alpha < 1 and theta > -alpha, got {(alpha, theta)}")
    g = _as_rng(rng)
    a, t = float(alpha), float(theta)
    out = []
    stick = 1.0
    for i in range(1, k + 1):
        w = g.beta(1.0 - a, t + i * a)
        out.append(stick * w)
        stick *= 1.0 - w
    return out


# ---------------------------------------------------------------------------
# scale-invariant Poisson sets and interval partitions


class ScaleInvariantSet:
    """Lazy atom set of the scale-invariant Poisson process PPP(theta dx/x).

    In log coordinates the atoms form a homogeneous rate-theta Poisson
    process on the line; downward atoms exp(-Gamma_k) < 1 and upward atoms
    exp(+Gamma'_k) > 1 are generated on demand, so queries are never affected
    by truncation.
    """

    def __init__(self, theta, rng):
        if not theta > 0:
            raise ValueError("theta must be positive")
        self.theta = float(theta)
        self._rng = _as_rng(rng)
        self._down: List[float] = []   # increasing partial sums Gamma_k
        self._up: List[float] = []     # increasing partial sums Gamma'_k

    def _extend_down(self, limit: float):
        while not self._down or self._down[-1] < limit:
            last = self._down[-1] if self._down else 0.0
            self._down.append(last + self._rng.exponential(1.0 / self.theta))

    def _extend_up(self, limit: float):
        while not self._up or self._up[-1] < limit:
            last = self._up[-1] if self._up else 0.0
            self._up.append(last + self._rng.exponential(1.0 / self.theta))

    def atoms_below(self, count: int) -> list:
        """The largest ``count`` atoms below 1, decreasing."""
        while len(self._down) < count:
            last = self._down[-1] if self._down else 0.0
            self._down.append(last + self._rng.exponential(1.0 / self.theta))
        return [math.exp(-g) for g in self._down[:count]]

    def has_atom_in(self, a: float, b: float) -> bool:
        """Whether the atom set meets the compact interval [a, b], 0 < a <= b."""
        if not 0 < a <= b:
            raise ValueError(f"need 0 < a <= b, got [{a}, {b}]")
        lo, hi = math.log(a), math.log(b)
        if lo < 0:
            self._extend_down(-lo)
            i = bisect.bisect_left(self._down, -min(hi, 0.0))
            if i < len(self._down) and self._down[i] <= -lo:
                return True
        if hi > 0:
            self._extend_up(hi)
            i = bisect.bisect_left(self._up, max(lo, 0.0))
            if i < len(self._up) and self._up[i] <= hi:
                return True
        return False


@dataclass
class IntervalPartitionSample:
    """Disjoint open subintervals of [0,1], left to right, plus residual mass.

    ``extend`` (optional) grows the partition toward 0 and returns the new
    residual; without it a uniform landing in the residual is an error.
    The rightmost interval is the meander.
    """

    intervals: List[tuple]
    residual: float
    extend: Optional[Callable[[], float]] = None

    def __post_init__(self):
        for (a, b), (c, d) in zip(self.intervals, self.intervals[1:]):
            if not (a < b <= c < d):
                raise ValueError("intervals must be disjoint and ordered")

    @property
    def meander_length(self) -> float:
        return self.intervals[-1][1] - self.intervals[-1][0]

    def locate(self, u: float) -> int:
        """Index of the interval containing u, extending on demand."""
        while u < self.intervals[0][0]:
            if self.extend is None:
                raise ValueError(
                    f"uniform {u} fell in the unresolved residual {self.residual}")
            self.residual = self.extend()
        lefts = [a for a, _ in self.intervals]
        i = bisect.bisect_right(lefts, u) - 1
        return i


def sample_scale_invariant_partition(theta, rng, depth_cutoff: float = 1e-12
                                     ) -> IntervalPartitionSample:
    """Gaps (exp(-Gamma_{k+1}), exp(-Gamma_k)) of the scale-invariant set.

    Atoms are generated until the unresolved residual mass drops below
    ``depth_cutoff``; the returned partition keeps extending lazily if a
    sample point lands below that.
    """
    if not theta > 0:
        raise ValueError("theta must be positive")
    g = _as_rng(rng)
    th = float(theta)
    atoms = [1.0]  # right endpoints; atoms[k] = exp(-Gamma_k), Gamma_0 = 0
    gamma = 0.0
    intervals: List[tuple] = []
    while atoms[-1] >= depth_cutoff:
        gamma += g.exponential(1.0 / th)
        nxt = math.exp(-gamma)
        intervals.append((nxt, atoms[-1]))
        atoms.append(nxt)
    intervals.reverse()

    state = {"gamma": gamma}
    sample = IntervalPartitionSample(intervals=intervals, residual=atoms[-1])

    def extend():
        prev = math.exp(-state["gamma"])
        state["gamma"] += g.exponential(1.0 / th)
        nxt = math.exp(-state["gamma"])
        sample.intervals.insert(0, (nxt, prev))
        return nxt

    sample.extend = extend
    return sample


def uniform_sampling_composition(partition: IntervalPartitionSample, n: int,
                                 rng) -> Composition:
    """Sizes of groups of n uniforms classified by containing interval."""
    g = _as_rng(rng)
    us = g.random(n)
    indices = sorted(partition.locate(u) for u in us)
    parts = []
    run = 1
    for prev, cur in zip(indices, indices[1:]):
        if cur == prev:
            run += 1
        else:
            parts.append(run)
            run = 1
    parts.append(run)
    return Composition(tuple(parts))


def poisson_sampling_composition(sset: ScaleInvariantSet, n: int, rng) -> Composition:
    """Digits xi_j = 1(S meets [eps_{j-1}, eps_j]) for rate-1 Poisson arrivals."""
    g = _as_rng(rng)
    eps = np.cumsum(g.exponential(1.0, size=n))
    bits = ["1"]
    for j in range(1, n):
        bits.append("1" if sset.has_atom_in(eps[j - 1], eps[j]) else "0")
    return Composition.from_binary("".join(bits))


# ---------------------------------------------------------------------------
# fragmentation


def fragment_sample(outer: Composition, inner_sampler: Callable[[int], Composition],
                    ) -> Composition:
    """Replace each part r of ``outer`` by an independent inner composition of r."""
    parts = []
    for r in outer.parts:
        inner = inner_sampler(r)
        if inner.n != r:
            raise ValueError(f"inner sampler returned a composition of {inner.n}, not {r}")
        parts.extend(inner.parts)
    return Composition(tuple(parts))


def fragment_cpf(outer: Cpf, inner: Cpf, max_n: int = 16) -> Cpf:
    """Exact CPF of the fragmentation product.

    p''(lam) sums over all 2^(l-1) segmentations of lam into consecutive
    segments: outer evaluated at the segment sums times the inner law of each
    segment.
    """

    def ev(comp):
        parts = comp.parts
        ell = len(parts)
        total = 0
        for mask in range(1 << (ell - 1)):
            # bit k set = boundary after part k+1
            segments = []
            start = 0
            for k in range(ell - 1):
                if mask >> k & 1:
                    segments.append(parts[start:k + 1])
                    start = k + 1
            segments.append(parts[start:])
            val = outer(Composition(tuple(sum(s) for s in segments)))
            for seg in segments:
                val = val * inner(Composition(seg))
            total = total + val
        return total

    return Cpf(name=f"fragment[{outer.name}|{inner.name}]", evaluate=ev, max_n=max_n)


# ---------------------------------------------------------------------------
# arrangement of partitions


def arrange_partition(partition: Partition, alpha, theta, rng) -> Composition:
    """Arrange a partition as a self-similar Markov composition.

    A size-biased pick becomes the rightmost part; the rest is arranged right
    to left with the deletion kernel weighting each part of size r of the
    remainder (of size S) proportionally to (S-r) tau + r (1-tau),
    tau = alpha/(2 alpha + theta).
    """
    if not (0 <= alpha < 1 and theta > -alpha):
        raise ValueError(f"need 0 <= alpha < 1 and theta > -alpha, got {(alpha, theta)}")
    g = _as_rng(rng)
    tau = float(alpha) / (2.0 * float(alpha) + float(theta))
    remaining = list(partition.parts)
    s = partition.n
    placed = []
    i = size_biased_pick(remaining, g)
    placed.append(remaining.pop(i))
    s -= placed[-1]
    while remaining:
        weights = [(s - r) * tau + r * (1.0 - tau) for r in remaining]
        i = size_biased_pick(weights, g)
        placed.append(remaining.pop(i))
        s -= placed[-1]
    return Composition(tuple(reversed(placed)))


# ---------------------------------------------------------------------------
# batch kernels


def codes_to_counts(codes: np.ndarray, n: int) -> np.ndarray:
    """Counts per composition in code order (length 2^(n-1))."""
    base = 1 << (n - 1)
    return np.bincount(codes - base, minlength=base)


def batch_ewens_strings(theta, n: int, draws: int, stream: RngStream) -> np.ndarray:
    return _kernels.ewens_string_codes(float(theta), n, draws, stream.kernel_seed())


def batch_renewal_strings(alpha, n: int, draws: int, stream: RngStream) -> np.ndarray:
    cdf = renewal_spacing_cdf(alpha, n)
    return _kernels.renewal_string_codes(cdf, n, draws, stream.kernel_seed())


def batch_markov_compositions(dm: DecrementMatrixPair, n: int, draws: int,
                              stream: RngStream) -> np.ndarray:
    q_cdf = np.ones((n, n))
    for m in range(1, n + 1):
        q_cdf[m - 1, :m] = np.cumsum([float(v) for v in dm.q.row(m)])
    qstar_cdf = np.cumsum([float(v) for v in dm.qstar.row(n)])
    return _kernels.markov_chain_codes(q_cdf, qstar_cdf, n, draws, stream.kernel_seed())


def batch_uniform_construction(theta, n: int, draws: int, stream: RngStream) -> np.ndarray:
    """Uniform sampling from the scale-invariant set, vectorised over draws."""
    return _kernels.uniform_set_codes(float(theta), n, draws, stream.kernel_seed())


def batch_poisson_construction(theta, n: int, draws: int, stream: RngStream) -> np.ndarray:
    """Poisson sampling of digits from the scale-invariant set, vectorised."""
    return _kernels.poisson_set_codes(float(theta), n, draws, stream.kernel_seed())


def sample_partition_batch(alpha, theta, n: int, draws: int, stream: RngStream
                           ) -> np.ndarray:
    """Partition draws from the exact (alpha,theta) partition law, as a
    zero-padded (draws, max_parts) parts matrix."""
    partitions = enumerate_partitions(n)
    probs = np.array([float(partition_law(alpha, theta, lam)) for lam in partitions])
    probs = probs / probs.sum()
    g = stream.generator()
    picks = g.choice(len(partitions), size=draws, p=probs)
    kmax = max(p.num_parts for p in partitions)
    mat = np.zeros((len(partitions), kmax), dtype=np.int64)
    for i, lam in enumerate(partitions):
        mat[i, :lam.num_parts] = lam.parts
    return mat[picks]


def batch_arrangements(parts_matrix: np.ndarray, n: int, alpha, theta,
                       stream: RngStream) -> np.ndarray:
    tau = float(alpha) / (2.0 * float(alpha) + float(theta))
    return _kernels.arrangement_codes(parts_matrix, n, tau, stream.kernel_seed(salt=1))
