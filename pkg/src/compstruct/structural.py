"""Structural-distribution machinery and moment-based reconstruction.

The structural distribution is the law of the length V of the interval
containing an independent uniform point.  Its moments p(n) = E V^(n-1) are
read off a CPF at the one-part composition, and drive expected block counts,
deletion-size laws, potential functions, and the reconstruction of a
self-similar Markov CPF from its moments alone.

All alternating binomial sums run in exact rationals when the inputs are;
these sums cancel catastrophically in floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .composition import Composition, enumerate_compositions
from .laws import Cpf, DecrementMatrix, DecrementMatrixPair, MeanderLaw, markov_cpf
from .ratmath import binom, is_exact

__all__ = [
    "StructuralMoments",
    "structural_moments",
    "block_count_row",
    "expected_num_parts",
    "potential_from_cpf",
    "deletion_law",
    "last_part_law",
    "size_biased_part_law",
    "ReconstructionError",
    "reconstruct_markov",
    "DensityCheckReport",
    "structural_density_check",
]


@dataclass(frozen=True)
class StructuralMoments:
    """p(1..N) with p(n) = E V^(n-1); p(1) = 1."""

    p: tuple

    def __post_init__(self):
        if not self.p or self.p[0] != 1:
            raise ValueError("moment sequence must start with p(1) = 1")

    def __call__(self, n: int):
        if not 1 <= n <= len(self.p):
            raise ValueError(f"moment p({n}) not available (have 1..{len(self.p)})")
        return self.p[n - 1]

    @property
    def max_n(self) -> int:
        return len(self.p)


def structural_moments(cpf: Cpf, N: int) -> StructuralMoments:
    """p(n) = cpf((n)): probability the n-ball composition has a single part."""
    return StructuralMoments(tuple(cpf(Composition((n,))) for n in range(1, N + 1)))


def block_count_row(moments: StructuralMoments, n: int) -> list:
    """mu_{n,r} = E K_{n,r} = C(n,r) E[V^(r-1) (1-V)^(n-r)], r = 1..n."""
    if n > moments.max_n:
        raise ValueError(f"need moments up to p({n})")
    row = []
    for r in range(1, n + 1):
        total = 0
        for j in range(n - r + 1):
            term = binom(n - r, j) * moments(r + j)
            total = total + (term if j % 2 == 0 else -term)
        row.append(binom(n, r) * total)
    return row


def expected_num_parts(moments: StructuralMoments, n: int):
    """mu_n = E K_n."""
    return sum(block_count_row(moments, n))


def potential_from_cpf(moments: StructuralMoments, j: int):
    """g(j) = E (1-V)^(j-1), expanded in the structural moments."""
    if j > moments.max_n:
        raise ValueError(f"need moments up to p({j})")
    total = 0
    for i in range(j):
        term = binom(j - 1, i) * moments(i + 1)
        total = total + (term if i % 2 == 0 else -term)
    return total


def deletion_law(mu_row_n: Sequence, mu_row_prev: Sequence) -> list:
    """Size law omega_{n,r} of the box hit by the removed ball (Lemma-style).

    omega_{n,n} = mu_{n,n} and omega_{n,r} = omega_{n,r+1} + mu_{n,r} -
    mu_{n-1,r}, filled descending in r.  A negative intermediate signals that
    the two block-count rows do not come from a single-ball coupling.
    """
    n = len(mu_row_n)
    if len(mu_row_prev) != n - 1:
        raise ValueError("rows must be for n and n-1")
    omega = [None] * n
    omega[n - 1] = mu_row_n[n - 1]
    for r in range(n - 1, 0, -1):
        omega[r - 1] = omega[r] + mu_row_n[r - 1] - mu_row_prev[r - 1]
    eps = 0 if is_exact(*mu_row_n) else 1e-12
    if any(w < -eps for w in omega):
        raise ValueError(f"inconsistent block-count rows: negative omega in {omega}")
    return omega


def last_part_law(cpf: Cpf, n: int) -> list:
    """P(L_n = r), r = 1..n, by enumeration of all compositions of n."""
    law = [0] * n
    for c in enumerate_compositions(n):
        law[c.last_part - 1] = law[c.last_part - 1] + cpf(c)
    return law


def size_biased_part_law(moments: StructuralMoments, n: int) -> list:
    """P(P_n = r) = r mu_{n,r} / n: the size-biased part-size law."""
    row = block_count_row(moments, n)
    if is_exact(*row):
        return [Fraction(r, n) * row[r - 1] for r in range(1, n + 1)]
    return [r * row[r - 1] / n for r in range(1, n + 1)]


class ReconstructionError(ValueError):
    """Moments do not come from a self-similar Markov composition structure."""


def reconstruct_markov(moments: StructuralMoments):
    """Recover (q, q*) and the CPF from structural moments p(1..N+1).

    Valid for self-similar Markov structures: q*(n:r) = r mu_{n,r}/n, and q is
    solved from the q* recursion of the decreasing chain.  The output is
    validated (row sums, nonnegativity); failures raise ReconstructionError
    rather than returning a non-law.
    """
    N = moments.max_n - 1
    if N < 1:
        raise ValueError("need at least p(1..2)")
    exact = is_exact(*moments.p)

    qstar_rows = {}
    for n in range(1, N + 2):
        row = block_count_row(moments, n)
        if exact:
            qstar_rows[n] = [Fraction(r, n) * row[r - 1] for r in range(1, n + 1)]
        else:
            qstar_rows[n] = [r * row[r - 1] / n for r in range(1, n + 1)]

    tol = 0 if exact else 1e-9
    one_block = all(abs(moments(k) - 1) <= tol for k in range(1, moments.max_n + 1))

    q_rows = {1: [Fraction(1) if exact else 1.0]}
    if one_block:
        # degenerate single-block law: q* is a point mass at r = n and the
        # interior chain never moves, so no q solve is needed
        for n in range(2, N + 1):
            q_rows[n] = [Fraction(0) if exact else 0.0] * (n - 1) + [
                Fraction(1) if exact else 1.0]
    else:
        for n in range(1, N + 1):
            pivot = qstar_rows[n + 1][0]
            if pivot == 0 or (not exact and abs(pivot) < 1e-15):
                raise ReconstructionError(
                    f"q*({n + 1}:1) = 0: no singleton mass, q is not solvable")
            row = []
            for r in range(1, n + 1):
                up_r1 = qstar_rows[n + 1][r] if r + 1 <= n + 1 else 0
                val = (qstar_rows[n][r - 1]
                       - Fraction(r + 1, n + 1) * up_r1
                       - Fraction(n + 1 - r, n + 1) * qstar_rows[n + 1][r - 1]) \
                    if exact else (
                    qstar_rows[n][r - 1]
                    - (r + 1) / (n + 1) * up_r1
                    - (n + 1 - r) / (n + 1) * qstar_rows[n + 1][r - 1])
                row.append(val * (n + 1) / pivot)
            q_rows[n] = row

    for n, row in list(q_rows.items()) + [(n, qstar_rows[n]) for n in qstar_rows]:
        s = sum(row)
        if (exact and (s != 1 or any(v < 0 for v in row))) or (
                not exact and (abs(s - 1) > 1e-8 or any(v < -1e-10 for v in row))):
            raise ReconstructionError(
                f"reconstructed row {n} is not a probability vector: {row}")

    def q_entry(n, r):
        try:
            return q_rows[n][r - 1]
        except KeyError:
            raise ValueError(f"reconstructed q only covers n <= {N}") from None

    def qstar_entry(n, r):
        try:
            return qstar_rows[n][r - 1]
        except KeyError:
            raise ValueError(f"reconstructed q* only covers n <= {N + 1}") from None

    pair = DecrementMatrixPair(q=DecrementMatrix("q[reconstructed]", q_entry),
                               qstar=DecrementMatrix("q*[reconstructed]", qstar_entry),
                               label="reconstructed")
    return pair, markov_cpf(pair, max_n=N)


@dataclass(frozen=True)
class DensityCheckReport:
    monotone: bool
    mass_ok: bool
    total_mass: float
    worst_violation: float

    @property
    def passed(self) -> bool:
        return self.monotone and self.mass_ok


def structural_density_check(law: MeanderLaw, grid_size: int = 10 ** 4,
                             tol: float = 1e-9) -> DensityCheckReport:
    """Check the structural-law shape: (1-x) phi(x) nonincreasing, mass 1.

    A law with no density part (pure atom) passes trivially.
    """
    atom = float(law.atom)
    if law.density is None:
        return DensityCheckReport(True, abs(atom - 1.0) < tol, atom, 0.0)

    xs = [(k + 0.5) / grid_size for k in range(grid_size)]
    vals = [(1.0 - x) * law.density(x) for x in xs]
    worst = 0.0
    for a, b in zip(vals, vals[1:]):
        worst = max(worst, b - a)
    monotone = worst <= 1e-9 * max(1.0, max(vals))

    from scipy.integrate import quad

    mass, _ = quad(law.density, 0.0, 1.0, epsabs=1e-12, epsrel=1e-12, limit=200)
    total = atom + mass
    return DensityCheckReport(monotone, abs(total - 1.0) < tol, total, worst)
