"""Compositions of an integer, their encodings and ball-deletion reductions.

A composition of n is an ordered tuple of positive parts summing to n.  It is
equivalently a length-n binary string starting with 1 (a 1 marks the first
ball of each box), so there are 2^(n-1) compositions of n.  All values here
are immutable and all operations are pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

#: Hard cap for exhaustive enumeration; 2^15 entries keep exact arithmetic
#: sub-second.
MAX_ENUM_N = 16


class EmptyComposition:
    """Sentinel for the result of deleting the only ball (n = 0)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EMPTY"


EMPTY = EmptyComposition()


@dataclass(frozen=True)
class Composition:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(int(p) for p in self.parts))
        if not self.parts:
            raise ValueError("composition needs at least one part")
        if any(p < 1 for p in self.parts):
            raise ValueError(f"parts must be positive, got {self.parts}")

    # -- basic accessors ---------------------------------------------------

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def num_parts(self) -> int:
        return len(self.parts)

    def partial_sums(self) -> tuple:
        out = []
        acc = 0
        for p in self.parts:
            acc += p
            out.append(acc)
        return tuple(out)

    @property
    def last_part(self) -> int:
        return self.parts[-1]

    # -- encodings ---------------------------------------------------------

    def to_binary(self) -> str:
        """Binary string of length n: a 1 at the first ball of each box."""
        return "".join("1" + "0" * (p - 1) for p in self.parts)

    @property
    def code(self) -> int:
        """Binary string read as an integer (MSB = first digit, always 1)."""
        return int(self.to_binary(), 2)

    @classmethod
    def from_binary(cls, bits: str) -> "Composition":
        if not bits or bits[0] != "1" or set(bits) - {"0", "1"}:
            raise ValueError(f"not a valid composition code: {bits!r}")
        parts = []
        run = 0
        for b in bits:
            if b == "1":
                if run:
                    parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        return cls(tuple(parts))

    @classmethod
    def from_code(cls, code: int, n: int) -> "Composition":
        return cls.from_binary(format(code, f"0{n}b"))

    @classmethod
    def from_string(cls, text: str) -> "Composition":
        """Parse comma-separated parts, e.g. ``"2,4,1,2"``."""
        try:
            parts = tuple(int(tok) for tok in text.split(","))
        except ValueError:
            raise ValueError(f"cannot parse composition {text!r}") from None
        return cls(parts)

    def __str__(self):
        return ",".join(str(p) for p in self.parts)

    # -- rearrangements ----------------------------------------------------

    def reverse(self) -> "Composition":
        return Composition(self.parts[::-1])

    def rank(self) -> "Partition":
        """Decreasing rearrangement (the partition derived from self)."""
        return Partition(tuple(sorted(self.parts, reverse=True)))

    # -- reductions --------------------------------------------------------

    def delete_ball(self, pos: int):
        """Remove the ball at place ``pos`` (1-based); empty boxes vanish.

        Returns EMPTY when the composition had a single ball.
        """
        n = self.n
        if not 1 <= pos <= n:
            raise ValueError(f"ball position {pos} out of range [1, {n}]")
        if n == 1:
            return EMPTY
        parts = list(self.parts)
        acc = 0
        for i, p in enumerate(parts):
            if pos <= acc + p:
                if p == 1:
                    del parts[i]
                else:
                    parts[i] = p - 1
                return Composition(tuple(parts))
            acc += p
        raise AssertionError("unreachable")


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing parts; the unordered multiset behind a composition."""

    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(int(p) for p in self.parts))
        if any(p < 1 for p in self.parts):
            raise ValueError(f"invalid partition parts {self.parts}")
        if list(self.parts) != sorted(self.parts, reverse=True):
            raise ValueError(f"partition parts must be sorted descending: {self.parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def num_parts(self) -> int:
        return len(self.parts)

    def remove_part(self, r: int) -> "Partition":
        parts = list(self.parts)
        parts.remove(r)
        return Partition(tuple(parts))

    def distinct_arrangements(self) -> Iterator[Composition]:
        seen = set()
        for perm in itertools.permutations(self.parts):
            if perm not in seen:
                seen.add(perm)
                yield Composition(perm)

    @classmethod
    def from_string(cls, text: str) -> "Partition":
        parts = tuple(sorted((int(t) for t in text.split(",")), reverse=True))
        return cls(parts)

    def __str__(self):
        return ",".join(str(p) for p in self.parts)


def enumerate_compositions(n: int, cap: int = MAX_ENUM_N):
    """All 2^(n-1) compositions of n, in lexicographic order of binary codes."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise ValueError(f"n = {n} exceeds enumeration cap {cap}")
    return [Composition.from_code(code, n) for code in range(1 << (n - 1), 1 << n)]


def enumerate_partitions(n: int) -> list:
    """All partitions of n, largest-first within each partition."""
    out = []

    def rec(remaining, maxpart, prefix):
        if remaining == 0:
            out.append(Partition(tuple(prefix)))
            return
        for p in range(min(maxpart, remaining), 0, -1):
            rec(remaining - p, p, prefix + [p])

    rec(n, n, [])
    return out


def uniform_reduction_kernel(mu: Composition, lam) -> Fraction:
    """Transition probability kappa(mu, lam) under uniform ball deletion."""
    target_n = 0 if lam is EMPTY else lam.n
    if mu.n != target_n + 1:
        raise ValueError(f"|mu| = {mu.n} must be |lambda| + 1 = {target_n + 1}")
    hits = sum(1 for pos in range(1, mu.n + 1) if mu.delete_ball(pos) == lam)
    return Fraction(hits, mu.n)
