"""Exit criteria. Each test prints one PASS/FAIL line in the terminal summary."""

import functools
import itertools
import json
import math
import random
import time
from fractions import Fraction

import pytest

from multisym import (
    DomainSpec,
    FieldSpec,
    Point,
    build_counterexample_S3,
    build_M,
    build_S,
    build_T,
    canonical_form,
    count_M,
    count_S,
    eval_invariant,
    same_orbit,
    sigma,
    tr,
    verify_expansion_theorem,
    verify_minimal,
    verify_separating,
)
from multisym.partitions import (
    all_permutations,
    fixes,
    meet,
    meet_all,
    min_block,
    parti,
    refines,
)

from conftest import ACCEPTANCE_LINES

Q = FieldSpec()
F5 = FieldSpec(5)
F7 = FieldSpec(7)

TR111_P = Point.from_columns([(1, 1, 2, 2), (1, 2, 1, 2), (1, 2, 2, 1)], Q)
TR111_Q = Point.from_columns([(1, 1, 2, 2), (1, 2, 1, 2), (2, 1, 1, 2)], Q)

# records of criteria 2-6 by worker count, for criterion 9
RECORDS: dict[int, dict[str, str]] = {}


def report(number, ok, detail, elapsed):
    ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'} ({elapsed:.1f}s) {detail}")


def _rec(r):
    return json.dumps(r.to_record(), sort_keys=True)


# runs for criteria 2-6; each returns (record key, report)
def run_c2(jobs):
    return {
        "T22": verify_separating(build_T(2, 2), DomainSpec.full_grid(2, 2, F5), jobs=jobs),
        "T23": verify_separating(build_T(2, 3), DomainSpec.full_grid(2, 3, F5), jobs=jobs),
        "T33": verify_separating(build_T(3, 3), DomainSpec.grid(3, 3, Q, [0, 1, 2]), jobs=jobs),
    }


def run_c3(jobs):
    T = build_T(4, 3)
    return {
        "T43": verify_separating(T, DomainSpec.grid(4, 3, Q, [0, 1, 2]), jobs=jobs),
        "T43-tr111": verify_separating(T.without(tr(1, 1, 1)), DomainSpec.grid(4, 3, Q, [1, 2]), jobs=jobs),
    }


def run_c4(jobs):
    T = build_T(4, 3)
    return {
        "min-F5": verify_minimal(T, DomainSpec.grid(4, 3, F5, [0, 1, 2, 3, 4]), budget=3_000_000, jobs=jobs),
        "min-12": verify_minimal(T, DomainSpec.grid(4, 3, Q, [1, 2]), budget=3_000_000, jobs=jobs),
    }


def run_c5(jobs):
    S = build_counterexample_S3()
    d = DomainSpec.full_grid(2, 3, F5)
    return {
        "CX": verify_separating(S, d, jobs=jobs),
        "CX-sigma2": verify_separating(S.without(sigma(2, 0, 1, 0)), d, jobs=jobs),
    }


def run_c6(jobs):
    return {
        "n2": verify_expansion_theorem(2, 2, 3, DomainSpec.full_grid(2, 3, F5), jobs=jobs),
        "n3": verify_expansion_theorem(3, 2, 4, DomainSpec.grid(3, 4, Q, [0, 1, 2]), jobs=jobs),
        "n4": verify_expansion_theorem(4, 3, 4, DomainSpec.grid(4, 4, Q, [0, 1]), jobs=jobs),
    }


RUNS = {2: run_c2, 3: run_c3, 4: run_c4, 5: run_c5, 6: run_c6}


def remember(number, jobs, reports):
    RECORDS.setdefault(jobs, {}).update({f"{number}:{k}": _rec(r) for k, r in reports.items()})


def test_criterion_1_orbit_oracle():
    rng = random.Random(1)
    t0 = time.perf_counter()
    disagreements = 0
    checked = 0
    for n in range(2, 6):
        perms = list(itertools.permutations(range(n)))
        for m in (1, 2, 3):
            for _ in range(1000):
                p = tuple(tuple(rng.randrange(7) for _ in range(m)) for _ in range(n))
                if rng.random() < 0.5:
                    s = rng.choice(perms)
                    q = tuple(p[s[i]] for i in range(n))
                    # occasionally perturb so that some related-looking pairs differ
                    if rng.random() < 0.3:
                        i, j = rng.randrange(n), rng.randrange(m)
                        row = list(q[i])
                        row[j] = (row[j] + 1) % 7
                        q = q[:i] + (tuple(row),) + q[i + 1:]
                else:
                    q = tuple(tuple(rng.randrange(7) for _ in range(m)) for _ in range(n))
                brute = any(tuple(q[s[i]] for i in range(n)) == p for s in perms)
                fast = same_orbit(Point(p, F7), Point(q, F7))
                disagreements += brute != fast
                checked += 1
    elapsed = time.perf_counter() - t0
    ok = disagreements == 0 and elapsed < 10
    report(1, ok, f"{checked} pairs, {disagreements} disagreements", elapsed)
    assert disagreements == 0
    assert elapsed < 10


def test_criterion_2_small_T_sets():
    t0 = time.perf_counter()
    reports = run_c2(1)
    elapsed = time.perf_counter() - t0
    remember(2, 1, reports)
    verdicts = {k: r.verdict for k, r in reports.items()}
    ok = all(v == "Separating" for v in verdicts.values()) and reports["T33"].points_checked == 3 ** 9
    ok = ok and elapsed < 30
    report(2, ok, str(verdicts), elapsed)
    assert ok


def test_criterion_3_T43():
    t0 = time.perf_counter()
    reports = run_c3(1)
    elapsed = time.perf_counter() - t0
    remember(3, 1, reports)
    full, cut = reports["T43"], reports["T43-tr111"]
    ok = full.verdict == "Separating" and full.points_checked == 531441
    ok = ok and cut.verdict == "CounterexampleFound"
    if cut.counterexample:
        p, q = cut.counterexample
        ok = ok and {canonical_form(p), canonical_form(q)} == {canonical_form(TR111_P), canonical_form(TR111_Q)}
        vals = (eval_invariant(tr(1, 1, 1), p), eval_invariant(tr(1, 1, 1), q))
        ok = ok and sorted(vals) == [13, 14]
    else:
        vals = None
    ok = ok and elapsed < 300
    report(3, ok, f"T43 {full.verdict}, without tr(1,1,1): {cut.verdict} tr(1,1,1) values {vals}", elapsed)
    assert ok


def test_criterion_4_minimality():
    t0 = time.perf_counter()
    reports = run_c4(1)
    elapsed = time.perf_counter() - t0
    remember(4, 1, reports)
    big, small = reports["min-F5"], reports["min-12"]
    witnessed = sum(w is not None for w in big.outcomes.values())
    w = small.outcomes[tr(1, 1, 1)]
    ok = len(big.outcomes) == 25 and big.all_witnessed and w is not None
    if w is not None:
        ok = ok and {canonical_form(w[0]), canonical_form(w[1])} == {canonical_form(TR111_P), canonical_form(TR111_Q)}
    ok = ok and elapsed < 600
    report(4, ok, f"{witnessed}/25 witnessed over fp:5 coords 0..4; tr(1,1,1) witness in {{1,2}}: {w is not None}",
           elapsed)
    assert ok


def test_criterion_5_counterexample_set():
    rng = random.Random(5)
    t0 = time.perf_counter()
    reports = run_c5(1)
    remember(5, 1, reports)
    bad = 0
    for _ in range(1000):
        n, m = rng.randint(2, 4), 2
        p = Point(tuple(tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(m))
                        for _ in range(n)), Q)
        lhs = 2 * eval_invariant(sigma(2, 0, 1), p)
        rhs = eval_invariant(tr(0, 1), p) ** 2 - eval_invariant(tr(0, 2), p)
        bad += lhs != rhs
    elapsed = time.perf_counter() - t0
    ok = all(r.verdict == "Separating" for r in reports.values())
    ok = ok and reports["CX"].points_checked == 5 ** 6 and bad == 0 and elapsed < 60
    report(5, ok, f"{ {k: r.verdict for k, r in reports.items()} }, identity failures {bad}", elapsed)
    assert ok


def test_criterion_6_expansion_theorem():
    t0 = time.perf_counter()
    reports = run_c6(1)
    elapsed = time.perf_counter() - t0
    remember(6, 1, reports)
    verdicts = {k: r.verdict for k, r in reports.items()}
    ok = all(v == "Separating" for v in verdicts.values()) and elapsed < 600
    report(6, ok, str(verdicts), elapsed)
    assert ok


def test_criterion_7_counting():
    t0 = time.perf_counter()
    failures = []
    for n in range(1, 6):
        for m in range(1, 11):
            if len(build_M(n, m)) != math.comb(m + n, n) - 1:
                failures.append(("M", n, m))
    for m in range(1, 13):
        if len(build_S(4, m)) != len(build_M(4, m)) - math.comb(m, 4):
            failures.append(("S", 4, m))
        if count_S(4, m) != len(build_S(4, m)):
            failures.append(("count_S", 4, m))

    def deviation(m):
        return abs(Fraction(count_S(4, m), count_M(4, m)) * m - 16)

    devs = [deviation(m) for m in range(50, 201)]
    decreasing = all(a > b for a, b in zip(devs, devs[1:]))
    within = deviation(200) <= Fraction(16, 10)
    elapsed = time.perf_counter() - t0
    ok = not failures and decreasing and within and elapsed < 60
    report(7, ok, f"count failures {failures}, scaled ratio at m=200: {float(16 - deviation(200)):.4f}, "
                  f"deviation decreasing 50..200: {decreasing}", elapsed)
    assert ok


def _partitions(n):
    def rgs(prefix, mx):
        if len(prefix) == n:
            yield parti(prefix)
            return
        for v in range(mx + 2):
            yield from rgs(prefix + [v], max(mx, v))
    yield from rgs([0], 0)


def _random_partition(rng, n):
    k = rng.randint(1, n)
    return parti([rng.randrange(k) for _ in range(n)])


@functools.lru_cache(maxsize=None)
def _perms(n):
    return tuple(all_permutations(n))


@functools.lru_cache(maxsize=None)
def _stab(A, n):
    return frozenset(s for s in _perms(n) if fixes(s, A))


def test_criterion_8_partition_lemmas():
    rng = random.Random(8)
    t0 = time.perf_counter()
    violations = {"meet-stabilizer": 0, "meet-grows": 0, "refine-iff-subgroup": 0, "chain-min-block": 0}
    counts = dict.fromkeys(violations, 0)

    # G_{A meet B} = G_A cap G_B for every permutation and every pair of partitions, n <= 6
    for n in range(1, 7):
        parts = list(_partitions(n))
        stab = {A: _stab(A, n) for A in parts}
        for A, B in itertools.product(parts, parts):
            M = meet(A, B)
            GM = stab[M] if M in stab else _stab(M, n)
            if GM != stab[A] & stab[B]:
                violations["meet-stabilizer"] += 1
            counts["meet-stabilizer"] += 1

    # G_A not inside G_B implies |A meet B| > |A|; also refinement <=> stabilizer inclusion for n <= 6
    for n in range(1, 9):
        perms = _perms(n) if n <= 6 else None
        for _ in range(500):
            A, B = _random_partition(rng, n), _random_partition(rng, n)
            if not refines(A, B):
                counts["meet-grows"] += 1
                if not len(meet(A, B)) > len(A):
                    violations["meet-grows"] += 1
            if perms is not None:
                counts["refine-iff-subgroup"] += 1
                if refines(A, B) != (_stab(A, n) <= _stab(B, n)):
                    violations["refine-iff-subgroup"] += 1

    # min block of the meet is 1 for chains of length >= floor(n/2) with G_{A_1} cap .. cap G_{A_(i-1)} not inside G_{A_i}
    for n in range(2, 9):
        perms = _perms(n) if n <= 6 else None
        made = 0
        while made < 500:
            r = rng.randint(max(1, n // 2), max(1, min(n - 1, n // 2 + 2)))
            chain = []
            G = frozenset(perms) if perms is not None else None
            for _ in range(r):
                for _attempt in range(100):
                    A = _random_partition(rng, n)
                    if perms is not None:
                        GA = _stab(A, n)
                        if not G <= GA:
                            G = G & GA
                            break
                    elif not chain or not refines(meet_all(chain), A):
                        if chain or len(A) > 1:
                            break
                else:
                    break
                chain.append(A)
            if len(chain) < r:
                continue
            made += 1
            counts["chain-min-block"] += 1
            if min_block(meet_all(chain)) != 1:
                violations["chain-min-block"] += 1

    elapsed = time.perf_counter() - t0
    ok = not any(violations.values()) and counts["meet-grows"] >= 500 and counts["chain-min-block"] >= 500
    ok = ok and elapsed < 60
    report(8, ok, f"instances {counts}, violations {violations}", elapsed)
    assert ok


@pytest.mark.parametrize("number", [2, 3, 4, 5, 6])
def test_criterion_9_determinism(number):
    t0 = time.perf_counter()
    if number not in {int(k.split(":")[0]) for k in RECORDS.get(1, {})}:
        remember(number, 1, RUNS[number](1))
    for jobs in (4, 8):
        remember(number, jobs, RUNS[number](jobs))
    keys = [k for k in RECORDS[1] if k.startswith(f"{number}:")]
    same = all(RECORDS[1][k] == RECORDS[j][k] for j in (4, 8) for k in keys)
    elapsed = time.perf_counter() - t0
    report(9, same, f"criterion {number} records identical for jobs 1, 4, 8: {same}", elapsed)
    assert same
