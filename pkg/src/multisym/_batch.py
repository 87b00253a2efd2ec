"""Vectorised evaluation and exact grouping over blocks of grid points.

A block of points is an ``(N, n, m)`` array of *digits*: indices into the
domain's coordinate list. Values are kept exact: ``int64`` when the field is
F_p with small p, or Q with integer coordinates and a provable bound on every
intermediate; otherwise numpy ``object`` arrays of Fractions / Python ints.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .fields import FieldSpec, Residue
from .invariants import InvariantSet

_INT64_SAFE = 1 << 62


class BatchEvaluator:
    """Evaluates every invariant of ``S`` on blocks of digit arrays."""

    def __init__(self, S: InvariantSet, n: int, field: FieldSpec, coords: Sequence):
        bad = [f for f in S if f.t > n]
        if bad:
            raise ValueError(f"{bad[0]} needs t <= n={n}")
        self.S = S
        self.n = n
        self.field = field
        self.mod = field.p
        self.elements = list(S)
        max_e = max((max(f.k) for f in S), default=0)
        raw = [field.element(c) for c in coords]
        if field.p is not None:
            ints = [c.value for c in raw]
            self.dtype = np.int64 if field.p < (1 << 31) else object
        elif all(c.denominator == 1 for c in raw):
            ints = [int(c) for c in raw]
            bound = max((abs(c) for c in ints), default=0)
            self.dtype = np.int64 if self._int_bound_ok(bound) else object
        else:
            ints = raw
            self.dtype = object
        self.pow_table = []
        for e in range(max_e + 1):
            if self.mod is not None:
                row = [pow(c, e, self.mod) for c in ints]
            else:
                row = [c ** e for c in ints]
            self.pow_table.append(np.array(row, dtype=self.dtype))

    def _int_bound_ok(self, bound: int) -> bool:
        for f in self.elements:
            v = bound ** f.total
            if math.comb(self.n, f.t) * v ** f.t >= _INT64_SAFE or v >= _INT64_SAFE:
                return False
        return True

    def _reduce(self, a):
        return a % self.mod if self.mod is not None else a

    def __call__(self, digits: np.ndarray) -> np.ndarray:
        N = digits.shape[0]
        out = np.empty((N, len(self.elements)), dtype=self.dtype)
        one = np.ones((N, self.n), dtype=self.dtype)
        cache: dict = {}
        for col, f in enumerate(self.elements):
            v = cache.get(f.k)
            if v is None:
                v = one
                for j, e in enumerate(f.k):
                    if e:
                        v = self._reduce(v * self.pow_table[e][digits[:, :, j]])
                cache[f.k] = v
            if f.t == 1:
                out[:, col] = self._reduce(v.sum(axis=1))
            else:
                e = [np.ones(N, dtype=self.dtype)] + [np.zeros(N, dtype=self.dtype)] * f.t
                for i in range(self.n):
                    vi = v[:, i]
                    for j in range(f.t, 0, -1):
                        e[j] = self._reduce(e[j] + vi * e[j - 1])
                out[:, col] = e[f.t]
        return out

    def to_field(self, value):
        """Convert a raw entry of the output back into a field element."""
        if self.mod is not None:
            return Residue(int(value), self.mod)
        return Fraction(value)


def dense_codes(col: np.ndarray) -> np.ndarray:
    """Replace the values of a 1-D array by dense integer codes (equal iff equal)."""
    if col.dtype != object:
        return np.unique(col, return_inverse=True)[1].ravel().astype(np.int64)
    table: dict = {}
    return np.fromiter((table.setdefault(x, len(table)) for x in col), dtype=np.int64, count=len(col))


def combine(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Dense codes of the pairs ``(a[i], b[i])``; inputs are dense codes."""
    if a.size == 0:
        return a
    width = int(b.max()) + 1
    return np.unique(a * width + b, return_inverse=True)[1].ravel().astype(np.int64)


def group_codes(codes: list[np.ndarray], N: int) -> np.ndarray:
    """Dense codes of whole rows, given per-column dense codes."""
    out = np.zeros(N, dtype=np.int64)
    for c in codes:
        out = combine(out, c)
    return out


def row_groups(F: np.ndarray) -> np.ndarray:
    return group_codes([dense_codes(F[:, j]) for j in range(F.shape[1])], F.shape[0])


def orbit_codes(digits: np.ndarray, s: int) -> np.ndarray:
    """Per point, the sorted tuple of row codes; equal rows iff same S_n orbit."""
    N, n, m = digits.shape
    if s ** m < _INT64_SAFE:
        weights = np.array([s ** j for j in range(m)], dtype=np.int64)
        rows = (digits * weights).sum(axis=2)
    else:
        weights = np.array([s ** j for j in range(m)], dtype=object)
        rows = (digits.astype(object) * weights).sum(axis=2)
    return np.sort(rows, axis=1)


def bucket_summaries(groups: np.ndarray, labels: np.ndarray):
    """For each group: first position, label at that position, and the first
    position whose label differs from it (``-1`` if none).

    Returns ``(first, first_label, diff)`` arrays indexed by group code.
    """
    N = groups.shape[0]
    G = int(groups.max()) + 1 if N else 0
    pos = np.arange(N, dtype=np.int64)
    first = np.full(G, N, dtype=np.int64)
    np.minimum.at(first, groups, pos)
    first_label = labels[first]
    mask = labels != first_label[groups]
    diff = np.full(G, N, dtype=np.int64)
    np.minimum.at(diff, groups[mask], pos[mask])
    diff[diff == N] = -1
    return first, first_label, diff


def least_conflict(groups: np.ndarray, labels: np.ndarray):
    """Lexicographically least ``(i, j)``, ``i < j``, with equal group and
    different label; ``None`` if every group is label-constant."""
    if groups.shape[0] == 0:
        return None
    first, _, diff = bucket_summaries(groups, labels)
    hit = diff >= 0
    if not hit.any():
        return None
    f, d = first[hit], diff[hit]
    k = np.lexsort((d, f))[0]
    return int(f[k]), int(d[k])


def row_key(row: np.ndarray):
    """Hashable exact encoding of one row."""
    if row.dtype == object:
        return tuple(row.tolist())
    return row.tobytes()
