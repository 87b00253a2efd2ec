"""Separation predicates and exhaustive / sampled verification.

Verification buckets the points of a finite domain by their exact fingerprint
(the vector of invariant values). A set separates the domain iff no bucket
holds two different S_n orbits. Work is cut into fixed-size chunks so that
the result depends only on the domain, never on the number of workers.

All verdicts are relative to the domain searched: a grid over a few
coordinates can refute separation, it cannot prove it over the whole field.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import _batch
from .catalog import build_M, m0_of
from .fields import FieldElement, FieldSpec
from .invariants import Invariant, InvariantSet, eval_invariant, expand_set
from .orbits import Point, same_orbit

log = logging.getLogger(__name__)

CHUNK = 1 << 16


class BudgetExceeded(RuntimeError):
    """The requested verification would exceed the configured memory budget."""


def _check_dims(S: InvariantSet, p: Point) -> None:
    if S.m != p.m:
        raise ValueError(f"set lives on m={S.m}, point has m={p.m}")


def fingerprint(S: InvariantSet, p: Point) -> tuple[FieldElement, ...]:
    _check_dims(S, p)
    return tuple(eval_invariant(f, p) for f in S)


def separates(S: InvariantSet, p: Point, q: Point) -> bool:
    if (p.n, p.m, p.field) != (q.n, q.m, q.field):
        raise ValueError("points are not comparable")
    return fingerprint(S, p) != fingerprint(S, q)


@dataclass(frozen=True)
class DomainSpec:
    """A finite search domain inside V^m.

    ``mode == "grid"`` enumerates all ``len(coords) ** (n*m)`` points, row by
    row, with coordinates taken in the order given. ``mode == "sample"`` draws
    ``count`` points uniformly from the same grid using ``seed``.
    """

    n: int
    m: int
    field: FieldSpec
    coords: tuple
    mode: str = "grid"
    count: int = 0
    seed: int = 0

    def __post_init__(self):
        coords = tuple(self.field.element(c) for c in self.coords)
        if not coords:
            raise ValueError("empty coordinate list")
        if len(set(coords)) != len(coords):
            raise ValueError(f"duplicate coordinates in {self.field}: {[str(c) for c in coords]}")
        if self.mode not in ("grid", "sample"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be >= 1")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must fit in 64 bits")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def grid(cls, n: int, m: int, field: FieldSpec, coords: Sequence) -> "DomainSpec":
        return cls(n, m, field, tuple(coords))

    @classmethod
    def full_grid(cls, n: int, m: int, field: FieldSpec) -> "DomainSpec":
        if field.p is None:
            raise ValueError("Q has no full grid")
        return cls(n, m, field, tuple(range(field.p)))

    @classmethod
    def sample(cls, n: int, m: int, field: FieldSpec, coords: Sequence, count: int, seed: int) -> "DomainSpec":
        return cls(n, m, field, tuple(coords), "sample", count, seed)

    @property
    def size(self) -> int:
        if self.mode == "sample":
            return self.count
        return len(self.coords) ** (self.n * self.m)

    def describe(self) -> dict:
        d = {
            "n": self.n,
            "m": self.m,
            "field": str(self.field),
            "coords": [str(c) for c in self.coords],
            "mode": self.mode,
        }
        if self.mode == "sample":
            d.update(count=self.count, seed=self.seed)
        return d

    def point(self, digits: np.ndarray) -> Point:
        rows = tuple(tuple(self.coords[int(x)] for x in row) for row in digits)
        return Point(rows, self.field)

    def chunk_ranges(self) -> Iterator[tuple[int, int, int]]:
        """``(chunk_number, start, stop)`` over global point indices."""
        for b, lo in enumerate(range(0, self.size, CHUNK)):
            yield b, lo, min(lo + CHUNK, self.size)

    def digits(self, block: int, lo: int, hi: int) -> np.ndarray:
        s, L = len(self.coords), self.n * self.m
        if self.mode == "grid":
            idx = np.arange(lo, hi, dtype=np.int64)
            weights = np.array([s ** (L - 1 - i) for i in range(L)], dtype=np.int64)
            flat = (idx[:, None] // weights) % s
        else:
            rng = np.random.default_rng([self.seed, block])
            flat = rng.integers(0, s, size=(hi - lo, L), dtype=np.int64)
        return flat.reshape(hi - lo, self.n, self.m)

    def point_at(self, index: int) -> Point:
        b, off = divmod(index, CHUNK)
        lo = b * CHUNK
        hi = min(lo + CHUNK, self.size)
        return self.point(self.digits(b, lo, hi)[index - lo])


@dataclass(frozen=True)
class SeparationReport:
    verdict: str  # "Separating" | "CounterexampleFound" | "InconclusiveSample"
    points_checked: int
    buckets: int
    counterexample: tuple[Point, Point] | None = None

    @property
    def ok(self) -> bool:
        return self.verdict == "Separating"

    def to_record(self) -> dict:
        rec = {
            "verdict": self.verdict,
            "points_checked": self.points_checked,
            "buckets": self.buckets,
            "counterexample": None,
        }
        if self.counterexample is not None:
            p, q = self.counterexample
            rec["counterexample"] = {"p": p.to_text(), "q": q.to_text()}
        return rec


@dataclass
class MinimalityReport:
    outcomes: dict[Invariant, tuple[Point, Point] | None] = field(default_factory=dict)
    points_checked: int = 0

    @property
    def all_witnessed(self) -> bool:
        return all(w is not None for w in self.outcomes.values())

    def unknown(self) -> list[Invariant]:
        return [f for f, w in self.outcomes.items() if w is None]

    def to_record(self) -> dict:
        rows = []
        for f, w in self.outcomes.items():
            row = {"invariant": str(f), "t": f.t, "k": list(f.k)}
            if w is None:
                row["outcome"] = "Unknown"
            else:
                row["outcome"] = "Witness"
                row["p"], row["q"] = w[0].to_text(), w[1].to_text()
            rows.append(row)
        return {
            "verdict": "AllWitnessed" if self.all_witnessed else "SomeUnknown",
            "points_checked": self.points_checked,
            "elements": rows,
        }


def _map(fn, items, jobs: int):
    if jobs <= 1:
        return map(fn, items)
    pool = ThreadPoolExecutor(max_workers=jobs)
    try:
        return list(pool.map(fn, items))
    finally:
        pool.shutdown()


# A bucket summary is (first index, orbit key of first point, first index whose
# orbit differs from it or None). Merging is associative and commutative.
def _merge_bucket(a, b):
    if b[0] < a[0]:
        a, b = b, a
    cand = b[0] if b[1] != a[1] else b[2]
    diff = a[2] if cand is None else cand if a[2] is None else min(a[2], cand)
    return (a[0], a[1], diff)


def verify_separating(
    S: InvariantSet,
    d: DomainSpec,
    jobs: int = 1,
    max_points: int = 50_000_000,
    max_buckets: int = 10_000_000,
) -> SeparationReport:
    """Check that no two points of ``d`` in distinct orbits share a fingerprint.

    For a grid the reported counterexample is the lexicographically least pair
    ``(i, j)`` of enumeration indices; for samples it is the least pair by
    sample index.
    """
    if S.m != d.m:
        raise ValueError(f"set lives on m={S.m}, domain has m={d.m}")
    if d.size > max_points:
        raise BudgetExceeded(f"domain has {d.size} points, budget is {max_points}")
    ev = _batch.BatchEvaluator(S, d.n, d.field, d.coords)
    s = len(d.coords)

    def work(chunk):
        b, lo, hi = chunk
        digits = d.digits(b, lo, hi)
        F = ev(digits)
        groups = _batch.row_groups(F)
        orb = _batch.orbit_codes(digits, s)
        labels = _batch.row_groups(orb)
        first, _, diff = _batch.bucket_summaries(groups, labels)
        out = {}
        for g in range(first.shape[0]):
            i = int(first[g])
            out[_batch.row_key(F[i])] = (
                lo + i,
                _batch.row_key(orb[i]),
                None if diff[g] < 0 else lo + int(diff[g]),
            )
        return out

    buckets: dict = {}
    for part in _map(work, list(d.chunk_ranges()), jobs):
        for key, summ in part.items():
            old = buckets.get(key)
            buckets[key] = summ if old is None else _merge_bucket(old, summ)
        if len(buckets) > max_buckets:
            raise BudgetExceeded(f"more than {max_buckets} fingerprint buckets")

    pairs = [(a, c) for a, _, c in buckets.values() if c is not None]
    if pairs:
        i, j = min(pairs)
        p, q = d.point_at(i), d.point_at(j)
        if same_orbit(p, q) or separates(S, p, q):
            raise AssertionError(f"engine produced an invalid counterexample {p!r} / {q!r}")
        return SeparationReport("CounterexampleFound", d.size, len(buckets), (p, q))
    verdict = "Separating" if d.mode == "grid" else "InconclusiveSample"
    return SeparationReport(verdict, d.size, len(buckets))


def verify_expansion_theorem(n: int, m0: int, m: int, d: DomainSpec, jobs: int = 1) -> SeparationReport:
    """Expand the power-sum generators for ``m0`` variable sets to ``m`` and
    verify the result separates ``d``."""
    if m0 < m0_of(n):
        raise ValueError(f"m0={m0} is below floor(n/2)+1={m0_of(n)}")
    if m < m0:
        raise ValueError(f"need m >= m0, got m={m}, m0={m0}")
    if d.n != n or d.m != m:
        raise ValueError("domain shape does not match (n, m)")
    S = expand_set(build_M(n, m0), m)
    return verify_separating(S, d, jobs=jobs)


def _witness_stages(d: DomainSpec):
    """Sub-grids of ``d`` to search, smallest first.

    Each stage frees a subset of the ``m`` columns over a prefix of the
    coordinate list and pins the remaining columns to 0 (or the first
    coordinate when 0 is absent). Zero columns kill every invariant that
    involves them, which is how witnesses lift from fewer variable sets.
    """
    s = len(d.coords)
    zero = d.field.zero()
    pin = d.coords.index(zero) if zero in d.coords else 0
    stages = []
    for size in range(2 if s > 1 else 1, s + 1):
        for r in range(1, d.m + 1):
            for cols in itertools.combinations(range(d.m), r):
                stages.append((size ** (d.n * r), size, r, cols))
    stages.sort()
    for npts, size, r, cols in stages:
        yield npts, size, cols, pin


def _stage_digits(d: DomainSpec, size: int, cols: tuple[int, ...], pin: int) -> np.ndarray:
    L = d.n * len(cols)
    npts = size ** L
    idx = np.arange(npts, dtype=np.int64)
    weights = np.array([size ** (L - 1 - i) for i in range(L)], dtype=np.int64)
    free = ((idx[:, None] // weights) % size).reshape(npts, d.n, len(cols))
    digits = np.full((npts, d.n, d.m), pin, dtype=np.int64)
    digits[:, :, list(cols)] = free
    return digits


def _find_witnesses(F: np.ndarray, todo: list[int]) -> dict[int, tuple[int, int]]:
    codes = [_batch.dense_codes(F[:, j]) for j in range(F.shape[1])]
    N = F.shape[0]
    c = len(codes)
    prefix = [np.zeros(N, dtype=np.int64)]
    for j in range(c):
        prefix.append(_batch.combine(prefix[-1], codes[j]))
    suffix = [np.zeros(N, dtype=np.int64)]
    for j in reversed(range(c)):
        suffix.append(_batch.combine(suffix[-1], codes[j]))
    suffix.reverse()  # suffix[j] covers columns j..c-1
    found = {}
    for f in todo:
        others = _batch.combine(prefix[f], suffix[f + 1])
        hit = _batch.least_conflict(others, codes[f])
        if hit is not None:
            found[f] = hit
    return found


def verify_minimal(
    S: InvariantSet,
    d: DomainSpec,
    budget: int = 2_000_000,
    jobs: int = 1,
    max_stage: int = 1_000_000,
) -> MinimalityReport:
    """For each ``f`` in S look for points told apart by ``f`` alone.

    Small sub-grids of ``d`` are searched exhaustively first, then random
    points of ``d`` until ``budget`` points have been evaluated. Every
    witness is re-checked with the scalar evaluator.
    """
    if S.m != d.m:
        raise ValueError(f"set lives on m={S.m}, domain has m={d.m}")
    ev = _batch.BatchEvaluator(S, d.n, d.field, d.coords)
    elements = list(S)
    report = MinimalityReport({f: None for f in elements})
    todo = list(range(len(elements)))
    spent = 0

    def evaluate(digits: np.ndarray) -> np.ndarray:
        blocks = [digits[lo:lo + CHUNK] for lo in range(0, digits.shape[0], CHUNK)]
        parts = list(_map(ev, blocks, jobs))
        return np.concatenate(parts) if parts else ev(digits)

    def record(digits: np.ndarray, F: np.ndarray) -> None:
        for f, (i, j) in sorted(_find_witnesses(F, todo).items()):
            p, q = d.point(digits[i]), d.point(digits[j])
            g = elements[f]
            if eval_invariant(g, p) == eval_invariant(g, q) or separates(S.without(g), p, q):
                raise AssertionError(f"engine produced an invalid witness for {g}")
            report.outcomes[g] = (p, q)
            todo.remove(f)

    if not elements:
        return report
    for npts, size, cols, pin in _witness_stages(d):
        if not todo:
            break
        if npts > max_stage or spent + npts > budget:
            continue
        digits = _stage_digits(d, size, cols, pin)
        spent += npts
        log.debug("stage size=%d cols=%s points=%d", size, cols, npts)
        record(digits, evaluate(digits))
        if size == len(d.coords) and len(cols) == d.m:
            # the whole grid has been searched; sampling cannot add anything
            report.points_checked = spent
            return report

    remaining = budget - spent
    if d.mode == "sample":
        remaining = min(remaining, d.count)
    sampler = DomainSpec.sample(d.n, d.m, d.field, d.coords, max(remaining, 0), d.seed)
    for b, lo, hi in sampler.chunk_ranges():
        if not todo:
            break
        digits = sampler.digits(b, lo, hi)
        spent += hi - lo
        record(digits, evaluate(digits))
    report.points_checked = spent
    return report
