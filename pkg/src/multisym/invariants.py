"""Elementary multisymmetric polynomials sigma_t(k) as descriptors.

An :class:`Invariant` is the pair ``(t, k)``; it is never expanded into
monomials. Evaluating it at a point takes the row monomials
``v_i = prod_j x[i][j] ** k[j]`` and returns the ``t``-th elementary symmetric
function of ``v_1, .., v_n``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .fields import FieldElement, pow_nonneg
from .orbits import Point


@dataclass(frozen=True, order=True)
class Invariant:
    t: int
    k: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(x) for x in self.k))
        if self.t < 1:
            raise ValueError(f"t must be >= 1, got {self.t}")
        if not self.k or any(x < 0 for x in self.k):
            raise ValueError(f"bad exponent {self.k}")

    @property
    def m(self) -> int:
        return len(self.k)

    @property
    def total(self) -> int:
        return sum(self.k)

    def __str__(self):
        args = ",".join(map(str, self.k))
        return f"tr({args})" if self.t == 1 else f"sigma_{self.t}({args})"


def tr(*k: int) -> Invariant:
    return Invariant(1, tuple(k))


def sigma(t: int, *k: int) -> Invariant:
    return Invariant(t, tuple(k))


def multidegree(f: Invariant) -> tuple[int, ...]:
    return tuple(f.t * x for x in f.k)


def eval_row_monomial(p: Point, i: int, k: Sequence[int]) -> FieldElement:
    if len(k) != p.m:
        raise ValueError(f"exponent of length {len(k)} on a point with m={p.m}")
    out = p.field.one()
    for x, e in zip(p.rows[i], k):
        out = out * pow_nonneg(x, e)
    return out


def elementary_symmetric(values: Sequence, t: int, one):
    """Coefficient of z**t in prod(1 + z*v); O(len(values) * t)."""
    e = [one] + [one * 0] * t
    for v in values:
        for j in range(t, 0, -1):
            e[j] = e[j] + v * e[j - 1]
    return e[t]


def _check_eval(f: Invariant, p: Point) -> None:
    if not 1 <= f.t <= p.n:
        raise ValueError(f"{f} needs 1 <= t <= n={p.n}")
    if f.m != p.m:
        raise ValueError(f"{f} has m={f.m}, point has m={p.m}")


def eval_invariant(f: Invariant, p: Point) -> FieldElement:
    _check_eval(f, p)
    vals = [eval_row_monomial(p, i, f.k) for i in range(p.n)]
    return elementary_symmetric(vals, f.t, p.field.one())


def eval_invariant_bruteforce(f: Invariant, p: Point) -> FieldElement:
    """Sum over all t-subsets of rows. Test oracle only."""
    _check_eval(f, p)
    vals = [eval_row_monomial(p, i, f.k) for i in range(p.n)]
    total = p.field.zero()
    for subset in itertools.combinations(vals, f.t):
        total = total + math.prod(subset, start=p.field.one())
    return total


def admissible_tuples(m0: int, m: int) -> list[tuple[int, ...]]:
    """Strictly increasing ``m0``-tuples from ``1..m``, lexicographic."""
    if m0 < 1 or m0 > m:
        raise ValueError(f"need 1 <= m0 <= m, got m0={m0}, m={m}")
    return list(itertools.combinations(range(1, m + 1), m0))


def expand_invariant(f: Invariant, j: Sequence[int], m: int) -> Invariant:
    """Send variable set ``s`` of ``f`` to variable set ``j[s]`` (1-based) of m."""
    j = tuple(j)
    if len(j) != f.m:
        raise ValueError(f"tuple {j} does not match m0={f.m}")
    if any(a >= b for a, b in zip(j, j[1:])) or (j and (j[0] < 1 or j[-1] > m)):
        raise ValueError(f"{j} is not {m}-admissible")
    k = [0] * m
    for pos, e in zip(j, f.k):
        k[pos - 1] = e
    return Invariant(f.t, tuple(k))


class InvariantSet:
    """Ordered, duplicate-free collection of invariants on a common ``m``."""

    def __init__(self, elements: Iterable[Invariant], m: int):
        if m < 1:
            raise ValueError("m must be >= 1")
        self.m = m
        seen: dict[Invariant, None] = {}
        for f in elements:
            if f.m != m:
                raise ValueError(f"{f} does not live on m={m} variable sets")
            seen.setdefault(f, None)
        self.elements: tuple[Invariant, ...] = tuple(seen)
        self._index = {f: i for i, f in enumerate(self.elements)}

    def __iter__(self) -> Iterator[Invariant]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, f) -> bool:
        return f in self._index

    def __eq__(self, other):
        if not isinstance(other, InvariantSet):
            return NotImplemented
        return self.m == other.m and self.elements == other.elements

    def __hash__(self):
        return hash((self.m, self.elements))

    def __repr__(self):
        return f"InvariantSet(m={self.m}, [{', '.join(map(str, self.elements))}])"

    def index(self, f: Invariant) -> int:
        return self._index[f]

    def as_frozenset(self) -> frozenset[Invariant]:
        return frozenset(self.elements)

    def sorted(self) -> "InvariantSet":
        return InvariantSet(sorted(self.elements), self.m)

    def without(self, f: Invariant) -> "InvariantSet":
        if f not in self:
            raise KeyError(str(f))
        return InvariantSet((g for g in self.elements if g != f), self.m)

    def union(self, other: "InvariantSet") -> "InvariantSet":
        return InvariantSet(itertools.chain(self.elements, other.elements), self.m)

    def max_t(self) -> int:
        return max((f.t for f in self.elements), default=0)

    def to_text(self) -> str:
        lines = [f"m {self.m}"]
        lines += ["sigma %d %s" % (f.t, " ".join(map(str, f.k))) for f in self.elements]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "InvariantSet":
        m = None
        elements = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                if parts[0] == "m" and len(parts) == 2:
                    if m is not None:
                        raise ValueError("duplicate header")
                    m = int(parts[1])
                elif parts[0] == "sigma" and len(parts) >= 3:
                    if m is None:
                        raise ValueError("element before 'm <m>' header")
                    elements.append(Invariant(int(parts[1]), tuple(int(x) for x in parts[2:])))
                else:
                    raise ValueError(f"unrecognised line {raw!r}")
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        if m is None:
            raise ValueError("missing 'm <m>' header")
        return cls(elements, m)


def expand_set(S: InvariantSet, m: int) -> InvariantSet:
    """All ``f^(j)`` for ``f`` in S and m-admissible ``j``, sorted by (t, k)."""
    if m < S.m:
        raise ValueError(f"cannot expand from m={S.m} down to m={m}")
    if m == S.m:
        return S
    tuples = admissible_tuples(S.m, m)
    out = {expand_invariant(f, j, m) for f in S for j in tuples}
    return InvariantSet(sorted(out), m)


def is_elementary_set(S: InvariantSet) -> bool:
    """Closed under lowering t: sigma_t(k) in S implies sigma_l(k) in S for l <= t."""
    return all(Invariant(l, f.k) in S for f in S for l in range(1, f.t))


def _zero_reinsertions(k: tuple[int, ...], i: int) -> list[tuple[int, ...]]:
    rest = k[:i] + k[i + 1:]
    return [rest[:pos] + (0,) + rest[pos:] for pos in range(len(k))]


def satisfies_condition_c(S: InvariantSet) -> bool:
    """For sigma_t(k) in S with k_i = 0, every way of moving that zero
    to another slot (keeping the other entries in order) stays in S."""
    for f in S:
        for i, e in enumerate(f.k):
            if e != 0:
                continue
            for r in _zero_reinsertions(f.k, i):
                if Invariant(f.t, r) not in S:
                    return False
    return True
