"""Named invariant sets: the power-sum generators M, the expanded sets S,
the minimal separating sets T for n <= 4, and the n = 2 example showing that
expansion can break minimality.

Sets are returned sorted by ``(t, k)``; that order is a library convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .invariants import Invariant, InvariantSet, expand_set, sigma, tr


def m0_of(n: int) -> int:
    """floor(n/2) + 1, the number of variable sets it suffices to expand from."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return n // 2 + 1


def exponents(m: int, max_total: int, min_total: int = 1):
    """All k in N^m with min_total <= |k| <= max_total, lexicographic."""
    def rec(prefix, left, slots):
        if slots == 0:
            if len(prefix) and sum(prefix) >= min_total:
                yield tuple(prefix)
            return
        for e in range(left + 1):
            prefix.append(e)
            yield from rec(prefix, left - e, slots - 1)
            prefix.pop()

    yield from rec([], max_total, m)


def build_M(n: int, m: int) -> InvariantSet:
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    return InvariantSet((Invariant(1, k) for k in exponents(m, n)), m)


def build_S(n: int, m: int) -> InvariantSet:
    m0 = m0_of(n)
    if m < 1:
        raise ValueError("m must be >= 1")
    if m <= m0:
        return build_M(n, m)
    return expand_set(build_M(n, m0), m)


def count_M(n: int, m: int) -> int:
    return math.comb(m + n, n) - 1


def count_S(n: int, m: int) -> int:
    """|S_m| without building it.

    S_m consists of the tr(k) with 1 <= |k| <= n whose support has at most
    min(m0, m) entries; count by support size s and total degree d.
    """
    m0 = m0_of(n)
    return sum(
        math.comb(m, s) * math.comb(d - 1, s - 1)
        for s in range(1, min(m0, m) + 1)
        for d in range(s, n + 1)
    )


_T2 = [tr(1, 0), tr(0, 1), tr(2, 0), tr(0, 2), tr(1, 1)]
_T3 = [tr(r, 0) for r in (1, 2, 3)] + [tr(0, r) for r in (1, 2, 3)] + [tr(1, 1), tr(2, 1)]
_T4 = [tr(r, 0) for r in (1, 2, 3, 4)] + [tr(0, r) for r in (1, 2, 3, 4)] + [
    tr(1, 1), tr(2, 1), tr(1, 2), tr(3, 1)]


def build_T(n: int, m: int) -> InvariantSet:
    """The minimal separating set T_{n,m} for n in {2, 3, 4}, m >= 2.

    Only valid as a separating set when char(K) = 0 or char(K) > n.
    """
    if n not in (2, 3, 4):
        raise ValueError(f"T_(n,m) is only known for n in 2, 3, 4; got n={n}")
    if m < 2:
        raise ValueError(f"T_(n,m) needs m >= 2; got m={m}")
    base = InvariantSet({2: _T2, 3: _T3, 4: _T4}[n], 2).sorted()
    if n < 4 or m == 2:
        return expand_set(base, m).sorted()
    t43 = expand_set(base, 3).union(InvariantSet([tr(1, 1, 1)], 3)).sorted()
    return expand_set(t43, m).sorted()


CX_BASE = InvariantSet([tr(1, 0), tr(2, 0), tr(0, 1), sigma(2, 0, 1), tr(1, 1)], 2)


def build_counterexample_S3() -> InvariantSet:
    """Expansion to m = 3 of a minimal separating set for n = 2 (char != 2).

    The expansion is separating but not minimal: it contains tr(0,1,0),
    tr(0,2,0) and sigma_2(0,1,0), and 2*sigma_2 = tr(0,1)^2 - tr(0,2).
    """
    return expand_set(CX_BASE, 3)


def asymptotic_ratio_constant(n: int) -> tuple[Fraction, int]:
    """``(C, e)`` with |S_m| / |M_m| ~ C / m**e as m grows."""
    m0 = m0_of(n)
    c = Fraction(math.comb(n, m0) * math.factorial(n), math.factorial(m0))
    return c, n - m0


@dataclass(frozen=True)
class CatalogId:
    kind: str  # "M", "S", "T" or "CX"
    n: int = 2
    m: int = 3

    @classmethod
    def parse(cls, text: str) -> "CatalogId":
        text = text.strip()
        if text.upper() == "CX:S3":
            return cls("CX", 2, 3)
        parts = text.split(":")
        if len(parts) != 3 or parts[0] not in ("M", "S", "T"):
            raise ValueError(f"bad catalog id {text!r}; expected M:n:m, S:n:m, T:n:m or CX:S3")
        try:
            n, m = int(parts[1]), int(parts[2])
        except ValueError:
            raise ValueError(f"bad catalog id {text!r}") from None
        cid = cls(parts[0], n, m)
        if cid.kind == "T" and (n not in (2, 3, 4) or m < 2):
            raise ValueError("T:n:m needs n in 2, 3, 4 and m >= 2")
        if n < 1 or m < 1:
            raise ValueError("n and m must be >= 1")
        return cid

    def __str__(self):
        return "CX:S3" if self.kind == "CX" else f"{self.kind}:{self.n}:{self.m}"

    def build(self) -> InvariantSet:
        if self.kind == "M":
            return build_M(self.n, self.m)
        if self.kind == "S":
            return build_S(self.n, self.m)
        if self.kind == "T":
            return build_T(self.n, self.m)
        return build_counterexample_S3()
