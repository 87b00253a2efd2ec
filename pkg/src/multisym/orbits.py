"""Points of V^m and the diagonal S_n action on them.

A point is an ``n x m`` matrix: row ``i`` collects the ``i``-th coordinates of
the ``m`` vectors, column ``j`` is the vector ``a_j``. Permuting ``[n]`` permutes
rows, so the sorted tuple of rows is a complete orbit invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .fields import FieldElement, FieldSpec
from .partitions import Permutation, all_permutations


@dataclass(frozen=True)
class Point:
    rows: tuple[tuple[FieldElement, ...], ...]
    field: FieldSpec

    def __post_init__(self):
        rows = tuple(tuple(self.field.element(x) for x in r) for r in self.rows)
        if not rows:
            raise ValueError("a point needs at least one row")
        m = len(rows[0])
        if m == 0 or any(len(r) != m for r in rows):
            raise ValueError("point rows must be nonempty and of equal length")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], field: FieldSpec) -> "Point":
        return cls(tuple(zip(*columns)), field)

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return len(self.rows[0])

    def column(self, j: int) -> tuple[FieldElement, ...]:
        return tuple(r[j] for r in self.rows)

    def to_text(self) -> str:
        return "\n".join(" ".join(str(x) for x in r) for r in self.rows)

    @classmethod
    def from_text(cls, text: str, field: FieldSpec) -> "Point":
        rows = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                rows.append(tuple(line.split()))
        return cls(tuple(rows), field)

    def __str__(self):
        return self.to_text()


def _check_compatible(p: Point, q: Point) -> None:
    if (p.n, p.m) != (q.n, q.m):
        raise ValueError(f"shape mismatch: {p.n}x{p.m} vs {q.n}x{q.m}")
    if p.field != q.field:
        raise ValueError(f"field mismatch: {p.field} vs {q.field}")


def apply_perm(s: Permutation, p: Point) -> Point:
    """Row ``i`` of ``p`` moves to row ``s(i)``."""
    if s.n != p.n:
        raise ValueError(f"permutation of degree {s.n} on a point with {p.n} rows")
    rows: list = [None] * p.n
    for i, r in enumerate(p.rows):
        rows[s(i)] = r
    return Point(tuple(rows), p.field)


def canonical_form(p: Point) -> Point:
    return Point(tuple(sorted(p.rows)), p.field)


def same_orbit(p: Point, q: Point) -> bool:
    _check_compatible(p, q)
    return sorted(p.rows) == sorted(q.rows)


def same_orbit_bruteforce(p: Point, q: Point) -> bool:
    """Search all n! permutations for ``s`` with ``s.q == p``."""
    _check_compatible(p, q)
    return any(apply_perm(s, q) == p for s in all_permutations(p.n))
