"""Exact probability laws on compositions.

Covers the parametric composition probability functions (CPFs): the
Bernoulli-string family, the discrete-renewal family and the two-parameter
self-similar Markov family, together with the decrement-matrix calculus that
connects them to Levy data of regenerative sets.

Every formula here is a rational function of the parameters, so with
Fraction-valued parameters all identities can be checked bit-exactly.  Float
parameters (or a generic tail function) switch the same code paths to float
mode.
"""

from __future__ import annotations

import math

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .composition import Composition, Partition, enumerate_compositions
from .ratmath import binom, factorial, is_exact, rising

__all__ = [
    "Cpf",
    "DecrementMatrix",
    "DecrementMatrixPair",
    "LevySpec",
    "MeanderLaw",
    "ewens_cpf",
    "renewal_cpf",
    "markov_cpf",
    "polya_q",
    "two_param_q",
    "two_param_levy",
    "beta_meander",
    "pure_drift_meander",
    "levy_exponent",
    "levy_exponent_exact",
    "levy_binomial",
    "meander_moments",
    "stationary_pair",
    "two_param_stationary_pair",
    "potential_from_levy",
    "upchain_transition",
    "sibi_cpf",
    "partition_law",
]


# ---------------------------------------------------------------------------
# CPF container


@dataclass(frozen=True)
class Cpf:
    """A law over compositions of every n, evaluable exactly or in floats."""

    name: str
    evaluate: Callable[[Composition], object]
    max_n: int = 10 ** 9
    params: tuple = ()

    def __call__(self, comp: Composition):
        if comp.n > self.max_n:
            raise ValueError(f"{self.name}: n = {comp.n} beyond supported {self.max_n}")
        return self.evaluate(comp)

    def table(self, n: int):
        """(composition, probability) pairs in deterministic code order."""
        return [(c, self(c)) for c in enumerate_compositions(n)]

    def float_probs(self, n: int):
        """Probabilities in code order as floats (for sampling/chi-square)."""
        return [float(self(c)) for c in enumerate_compositions(n)]

    def reversed(self) -> "Cpf":
        base = self

        def ev(comp):
            return base(comp.reverse())

        return Cpf(name=base.name + "-reversed", evaluate=ev,
                   max_n=base.max_n, params=base.params)


def ewens_cpf(theta) -> Cpf:
    """Bernoulli-string CPF: p(lam) = theta^l n! / (theta)_n * prod 1/Lam_j."""
    if not theta > 0:
        raise ValueError(f"theta must be positive, got {theta}")

    def ev(comp):
        n = comp.n
        num = theta ** comp.num_parts * factorial(n)
        den = rising(theta, n)
        val = num / den if isinstance(theta, Fraction) else Fraction(1) * num / den
        for lam_j in comp.partial_sums():
            val = val / lam_j
        return val

    return Cpf(name="ewens", evaluate=ev, params=(theta,))


def renewal_cpf(alpha, reversed_: bool = False) -> Cpf:
    """Discrete-renewal CPF: p(lam) = lam_l alpha^(l-1) prod (1-alpha)_(lam_j-1)/lam_j!.

    With ``reversed_`` the law of the reversed composition is returned (the
    left-regenerative factor used in the fragmentation construction).
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must be in (0,1), got {alpha}")

    def ev(comp):
        val = comp.last_part * alpha ** (comp.num_parts - 1)
        for p in comp.parts:
            val = val * rising(1 - alpha, p - 1) / factorial(p)
        return val

    cpf = Cpf(name="renewal", evaluate=ev, params=(alpha,))
    return cpf.reversed() if reversed_ else cpf


# ---------------------------------------------------------------------------
# Decrement matrices


class DecrementMatrix:
    """Rows q(n:r), 1 <= r <= n, of a decrement matrix; entries are cached."""

    def __init__(self, name: str, entry: Callable[[int, int], object]):
        self.name = name
        self._entry = entry
        self._cache = {}

    def __call__(self, n: int, r: int):
        if not 1 <= r <= n:
            raise ValueError(f"{self.name}: need 1 <= r <= n, got (n={n}, r={r})")
        key = (n, r)
        if key not in self._cache:
            self._cache[key] = self._entry(n, r)
        return self._cache[key]

    def row(self, n: int):
        return [self(n, r) for r in range(1, n + 1)]

    def row_sum(self, n: int):
        return sum(self.row(n))

    def float_matrix(self, N: int):
        """(N, N) float array, row n-1 holding q(n:1..n) padded with zeros."""
        import numpy as np

        out = np.zeros((N, N))
        for n in range(1, N + 1):
            out[n - 1, :n] = [float(v) for v in self.row(n)]
        return out


@dataclass(frozen=True)
class DecrementMatrixPair:
    """Transition data (q, q*) of the decreasing chain in the product formula."""

    q: DecrementMatrix
    qstar: DecrementMatrix
    label: str = ""


def polya_q(alpha, theta) -> DecrementMatrix:
    """Polya-Eggenberger decrement matrix q_{alpha,theta}."""
    if not (0 <= alpha < 1 and theta > -alpha):
        raise ValueError(f"need 0 <= alpha < 1 and theta > -alpha, got {(alpha, theta)}")

    def entry(n, r):
        num = binom(n - 1, r - 1) * rising(theta + alpha, n - r) * rising(1 - alpha, r - 1)
        den = rising(theta + 1, n - 1)
        return _div(num, den, alpha, theta)

    return DecrementMatrix(f"polya({alpha},{theta})", entry)


def two_param_q(alpha, theta) -> DecrementMatrix:
    """Decrement matrix of the (alpha, theta) regenerative composition."""
    if not (0 <= alpha < 1 and theta >= 0 and alpha + theta > 0):
        raise ValueError(
            f"need 0 <= alpha < 1, theta >= 0, alpha + theta > 0, got {(alpha, theta)}")

    def entry(n, r):
        if r == n and theta == 0:
            # theta -> 0 limit of the closed form (0/0 at face value)
            val = rising(1 - alpha, n - 1) / math.factorial(n - 1)
            return _div(val, 1, alpha, theta)
        if is_exact(alpha, theta):
            num = binom(n, r) * rising(1 - alpha, r - 1) * ((n - r) * alpha + r * theta)
            den = rising(theta + n - r, r) * n
            return Fraction(num, 1) / den
        # log-space keeps large rows finite (plain float products overflow
        # past r ~ 170)
        a, t = float(alpha), float(theta)
        log = (math.lgamma(n + 1) - math.lgamma(r + 1) - math.lgamma(n - r + 1)
               + math.lgamma(r - a) - math.lgamma(1 - a)
               + math.lgamma(t + n - r) - math.lgamma(t + n))
        return math.exp(log) * ((n - r) * a + r * t) / n

    return DecrementMatrix(f"two-param({alpha},{theta})", entry)


def _div(num, den, *params):
    if is_exact(num, den, *params):
        return Fraction(num, 1) / den
    return num / den


def markov_cpf(dm: DecrementMatrixPair, max_n: int = 10 ** 9) -> Cpf:
    """Product-formula CPF: p(lam) = q*(n:lam_l) prod_{k<l} q(Lam_k:lam_k)."""

    def ev(comp):
        val = dm.qstar(comp.n, comp.last_part)
        sums = comp.partial_sums()
        for k in range(comp.num_parts - 1):
            val = val * dm.q(sums[k], comp.parts[k])
        return val

    return Cpf(name=f"markov[{dm.label or dm.q.name}]", evaluate=ev, max_n=max_n)


# ---------------------------------------------------------------------------
# Levy data


@dataclass(frozen=True)
class LevySpec:
    """Drift and tail x -> nu~[x,1] of a Levy measure carried to (0,1].

    ``alpha``/``theta`` mark the closed-form tail x^(-alpha) (1-x)^theta, for
    which exact rational evaluation of all ratios is available.  A generic
    ``tail`` callable is handled by float quadrature.
    """

    drift: object = 0
    tail: Optional[Callable[[float], float]] = None
    alpha: Optional[object] = None
    theta: Optional[object] = None
    label: str = ""

    @property
    def is_two_param(self) -> bool:
        return self.alpha is not None

    @property
    def is_exact(self) -> bool:
        return (self.is_two_param and is_exact(self.alpha, self.theta, self.drift)) or (
            self.tail is None and is_exact(self.drift))

    def tail_value(self, x: float) -> float:
        if self.is_two_param:
            return x ** (-float(self.alpha)) * (1.0 - x) ** float(self.theta)
        if self.tail is None:
            return 0.0
        return self.tail(x)

    def log_moment(self) -> float:
        """m = int |log(1-x)| nu~(dx) = int tail(x)/(1-x) dx (absolute, float)."""
        if self.is_two_param:
            from scipy.special import beta as beta_fn

            return float(beta_fn(1.0 - float(self.alpha), float(self.theta)))
        if self.tail is None:
            return 0.0
        return _quad01(lambda x: self.tail_value(x) / (1.0 - x))


def two_param_levy(alpha, theta) -> LevySpec:
    """Levy data with tail x^(-alpha) (1-x)^theta on (0,1]."""
    if not (0 <= alpha < 1 and theta > 0):
        raise ValueError(f"need 0 <= alpha < 1 and theta > 0, got {(alpha, theta)}")
    return LevySpec(drift=0, alpha=alpha, theta=theta, label=f"two-param({alpha},{theta})")


def _quad01(f, tol: float = 1e-12) -> float:
    """Integrate f over (0,1) with the singularity-prone endpoints split at 1/2."""
    from scipy.integrate import quad

    left, _ = quad(f, 0.0, 0.5, epsabs=tol, epsrel=tol, limit=200)
    right, _ = quad(f, 0.5, 1.0, epsabs=tol, epsrel=tol, limit=200)
    return left + right


def levy_exponent(spec: LevySpec, s) -> float:
    """Levy exponent Phi(s) = d s + s int_0^1 (1-x)^(s-1) tail(x) dx (float)."""
    if s < 0:
        raise ValueError("s must be >= 0")
    if s == 0:
        return 0.0
    if spec.is_two_param:
        from scipy.special import beta as beta_fn

        integral = float(beta_fn(1.0 - float(spec.alpha), s + float(spec.theta)))
    elif spec.tail is None:
        integral = 0.0
    else:
        integral = _quad01(lambda x: (1.0 - x) ** (s - 1) * spec.tail_value(x))
    return float(spec.drift) * s + s * integral


def levy_exponent_exact(spec: LevySpec, s: int) -> Fraction:
    """Exact Phi(s) under the m = 1 normalisation (only ratios are meaningful).

    For the closed-form tail, Phi(s)/m = s (theta)_s / (1-alpha+theta)_s.  For
    a pure-drift spec the absolute value d*s is returned.
    """
    if spec.is_two_param:
        if not spec.is_exact:
            raise ValueError("exact mode needs rational (alpha, theta)")
        a, t = Fraction(spec.alpha), Fraction(spec.theta)
        val = s * rising(t, s) / rising(1 - a + t, s)
        if spec.drift:
            raise ValueError("two-parameter spec with drift is not supported exactly")
        return Fraction(val)
    if spec.tail is None:
        return Fraction(spec.drift) * s
    raise ValueError("exact Levy exponent needs a closed-form spec")


def levy_binomial(spec: LevySpec, n: int, m: int, exact: Optional[bool] = None):
    """Phi(n:m) = C(n,m) sum_{j=0}^m (-1)^(j+1) C(m,j) Phi(n-m+j)."""
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got (n={n}, m={m})")
    if exact is None:
        exact = spec.is_exact
    phi = (lambda s: levy_exponent_exact(spec, s)) if exact else (
        lambda s: levy_exponent(spec, s))
    total = 0
    for j in range(m + 1):
        term = binom(m, j) * phi(n - m + j)
        total = total + (term if (j + 1) % 2 == 0 else -term)
    return binom(n, m) * total


# ---------------------------------------------------------------------------
# Meander laws (the stationary-delay distribution A_1 = 1 - exp(-X))


@dataclass(frozen=True)
class MeanderLaw:
    """Law of the meander length A_1, given by its joint moments.

    ``moment(a, b)`` returns E[A_1^a (1-A_1)^b]; ``atom`` is P(A_1 = 0);
    ``density`` (optional, float) is the density of the absolutely continuous
    part on (0, 1].
    """

    moment: Callable[[int, int], object]
    atom: object = 0
    density: Optional[Callable[[float], float]] = None
    label: str = ""


def beta_meander(alpha, theta) -> MeanderLaw:
    """A_1 ~ Beta(1-alpha, theta): the two-parameter stationary meander."""
    if not (0 <= alpha < 1 and theta > 0):
        raise ValueError(f"need 0 <= alpha < 1 and theta > 0, got {(alpha, theta)}")

    def moment(a, b):
        num = rising(1 - alpha, a) * rising(theta, b)
        den = rising(1 - alpha + theta, a + b)
        return _div(num, den, alpha, theta)

    def density(x):
        from scipy.special import beta as beta_fn

        a, t = float(alpha), float(theta)
        return x ** (-a) * (1.0 - x) ** (t - 1.0) / beta_fn(1.0 - a, t)

    return MeanderLaw(moment=moment, atom=0, density=density,
                      label=f"beta({1 - alpha},{theta})")


def pure_drift_meander(atom_mass=1) -> MeanderLaw:
    """Degenerate meander A_1 = 0 (heavy set driven by drift alone)."""

    def moment(a, b):
        return Fraction(1) if a == 0 else Fraction(0)

    return MeanderLaw(moment=moment, atom=atom_mass, density=None, label="drift-atom")


def meander_moments(law: MeanderLaw, n: int, m: int):
    """Psi(n:m) = C(n,m) E[A_1^m (1-A_1)^(n-m)]."""
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got (n={n}, m={m})")
    return binom(n, m) * law.moment(m, n - m)


# ---------------------------------------------------------------------------
# Stationary pairs and potentials


def stationary_pair(spec: LevySpec, law: MeanderLaw, N: Optional[int] = None,
                    exact: Optional[bool] = None) -> DecrementMatrixPair:
    """Decrement matrices q(n:m) = Phi(n:m)/Phi(n), q* = Psi(n:0) q + Psi(n:m).

    The meander law must be the stationary delay of ``spec``; this is checked
    through the potential identity E(1-A_1) = Phi(1)/(d+m).
    """
    if exact is None:
        exact = spec.is_exact and is_exact(law.moment(0, 1))
    _check_stationary_consistency(spec, law, exact)
    phi = (lambda s: levy_exponent_exact(spec, s)) if exact else (
        lambda s: levy_exponent(spec, s))

    def q_fn(n, m):
        return levy_binomial(spec, n, m, exact=exact) / phi(n)

    def qstar_fn(n, m):
        psi0 = meander_moments(law, n, 0)
        return psi0 * q_fn(n, m) + meander_moments(law, n, m)

    q = DecrementMatrix(f"q[{spec.label or 'levy'}]", q_fn)
    qstar = DecrementMatrix(f"q*[{law.label or 'meander'}]", qstar_fn)
    pair = DecrementMatrixPair(q=q, qstar=qstar, label=f"stationary[{spec.label}]")
    if N is not None:
        for n in range(1, N + 1):
            for m_ in (q, qstar):
                s = m_.row_sum(n)
                ok = s == 1 if exact else abs(s - 1.0) < 1e-9
                if not ok:
                    raise ValueError(f"{m_.name} row {n} sums to {s}, not 1")
    return pair


def _check_stationary_consistency(spec: LevySpec, law: MeanderLaw, exact: bool):
    lhs = law.moment(0, 1)
    if exact:
        if spec.is_two_param:
            # Phi(1)/(d+m) with d = 0 and Phi normalised by m
            rhs = levy_exponent_exact(spec, 1)
        else:
            # pure drift: Phi(1)/(d+0) = 1 and A_1 must vanish
            rhs = Fraction(1)
        if lhs != rhs:
            raise ValueError(f"meander law inconsistent with Levy data: "
                             f"E(1-A_1) = {lhs} but Phi(1)/(d+m) = {rhs}")
    else:
        dm = float(spec.drift) + spec.log_moment()
        if dm == 0:
            raise ValueError("spec has d + m = 0")
        rhs = levy_exponent(spec, 1) / dm
        if abs(float(lhs) - rhs) > 1e-9:
            raise ValueError(f"meander law inconsistent with Levy data: "
                             f"E(1-A_1) = {float(lhs)} but Phi(1)/(d+m) = {rhs}")


def two_param_stationary_pair(alpha, theta, N: Optional[int] = None) -> DecrementMatrixPair:
    """Stationary pair of the (alpha, theta) family, exact for rational params."""
    return stationary_pair(two_param_levy(alpha, theta), beta_meander(alpha, theta), N=N)


def potential_from_levy(spec: LevySpec, j: int, exact: bool = False):
    """g(1) = 1; g(j) = Phi(j-1) / ((d+m)(j-1)) for j > 1."""
    if j < 1:
        raise ValueError("j must be >= 1")
    if j == 1:
        return Fraction(1) if exact else 1.0
    if exact:
        if spec.is_two_param:
            a, t = Fraction(spec.alpha), Fraction(spec.theta)
            return rising(t, j - 1) / rising(1 - a + t, j - 1)
        if spec.tail is None and spec.drift:
            return Fraction(1)  # pure drift: Phi(s) = d s, m = 0
        raise ValueError("exact potential needs a closed-form spec")
    dm = float(spec.drift) + spec.log_moment()
    if dm == 0:
        raise ValueError("d + m = 0: potential undefined")
    return levy_exponent(spec, j - 1) / (dm * (j - 1))


def upchain_transition(q: DecrementMatrix, g: Callable[[int], object],
                       i: int, j: int):
    """Transition f(j|i) of the increasing chain: q(j-1:j-i) g(j) / g(i)."""
    if not 1 <= i < j:
        raise ValueError(f"need 1 <= i < j, got (i={i}, j={j})")
    gi = g(i)
    if not gi > 0:
        raise ValueError(f"zero potential g({i})")
    return q(j - 1, j - i) * g(j) / gi


# ---------------------------------------------------------------------------
# Size-biased arrangements of the two-parameter partition family


def sibi_cpf(alpha, theta) -> Cpf:
    """CPF of (alpha,theta) partitions arranged right-to-left size-biased.

    p^(lam) = prod_k q_{alpha, theta+(l-k)alpha}(Lam_k : lam_k).
    """
    if not (0 <= alpha < 1 and theta > -alpha):
        raise ValueError(f"need 0 <= alpha < 1 and theta > -alpha, got {(alpha, theta)}")
    matrices = {}

    def q_at(shift):
        if shift not in matrices:
            matrices[shift] = polya_q(alpha, theta + shift * alpha)
        return matrices[shift]

    def ev(comp):
        ell = comp.num_parts
        sums = comp.partial_sums()
        val = Fraction(1) if is_exact(alpha, theta) else 1.0
        for k in range(1, ell + 1):
            val = val * q_at(ell - k)(sums[k - 1], comp.parts[k - 1])
        return val

    return Cpf(name="sibi", evaluate=ev, params=(alpha, theta))


def partition_law(alpha, theta, partition: Partition):
    """Partition probability pi_{alpha,theta}: symmetrised size-biased CPF."""
    if not partition.parts:
        return Fraction(1) if is_exact(alpha, theta) else 1.0
    cpf = sibi_cpf(alpha, theta)
    return sum(cpf(c) for c in partition.distinct_arrangements())
