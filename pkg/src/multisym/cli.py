"""Command-line front end.

Exit status: 0 when the verdict is positive (separating, every element
witnessed, same orbit), 1 when it is negative or inconclusive, 2 on usage
errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from .catalog import CatalogId, asymptotic_ratio_constant, count_M, count_S, m0_of
from .fields import FieldSpec, char_ok_for
from .invariants import Invariant, InvariantSet
from .orbits import Point, same_orbit
from .separation import (
    BudgetExceeded,
    DomainSpec,
    fingerprint,
    verify_expansion_theorem,
    verify_minimal,
    verify_separating,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _parse_drop(text: str) -> Invariant:
    try:
        t, k = text.split(":")
        return Invariant(int(t), tuple(int(x) for x in k.split(",")))
    except ValueError:
        raise UsageError(f"bad --drop {text!r}; expected t:k1,k2,...") from None


def load_set(source: str, n: int | None) -> tuple[InvariantSet, int, CatalogId | None]:
    """Resolve a catalog id or a set file; returns (set, n, catalog id or None)."""
    try:
        cid = CatalogId.parse(source)
    except ValueError:
        cid = None
    if cid is not None:
        if n is not None and n != cid.n:
            raise UsageError(f"--n {n} contradicts {cid}")
        return cid.build(), cid.n, cid
    path = Path(source)
    if not path.is_file():
        raise UsageError(f"{source!r} is neither a catalog id nor a readable file")
    try:
        S = InvariantSet.from_text(path.read_text())
    except ValueError as exc:
        raise UsageError(f"{source}: {exc}") from None
    if n is None:
        raise UsageError("--n is required when the set comes from a file")
    return S, n, None


def _check_char(cid: CatalogId | None, field: FieldSpec, n: int) -> None:
    if cid is None:
        return
    if cid.kind in ("M", "S", "T") and not char_ok_for(field, n):
        raise UsageError(
            f"{cid} over {field} violates the hypothesis char(K) = 0 or char(K) > n (n={n})")
    if cid.kind == "CX" and field.characteristic == 2:
        raise UsageError("CX:S3 needs char(K) != 2")


def _domain(args, n: int, m: int, field: FieldSpec) -> DomainSpec:
    if args.coords is None:
        if field.p is None:
            raise UsageError("--coords is required over the rationals")
        coords = list(range(field.p))
    else:
        try:
            coords = [field.element(c) for c in args.coords.split(",")]
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad --coords: {exc}") from None
        if len(set(coords)) != len(coords):
            raise UsageError(f"--coords has duplicates in {field}")
    if args.samples:
        return DomainSpec.sample(n, m, field, coords, args.samples, args.seed)
    return DomainSpec.grid(n, m, field, coords)


def _field(text: str) -> FieldSpec:
    try:
        return FieldSpec.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def emit(record: dict, machine: bool, out=None) -> None:
    out = out or sys.stdout
    if machine:
        out.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")
        return
    for key, value in record.items():
        if isinstance(value, dict) and key == "counterexample":
            out.write(f"{key}:\n")
            for name, text in value.items():
                out.write(f"  {name}:\n")
                for line in text.splitlines():
                    out.write(f"    {line}\n")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            out.write(f"{key}:\n")
            for row in value:
                extra = ""
                if "p" in row:
                    extra = "  p=[%s] q=[%s]" % (row["p"].replace("\n", "; "), row["q"].replace("\n", "; "))
                out.write(f"  {row['invariant']}: {row['outcome']}{extra}\n")
        elif isinstance(value, dict):
            out.write(f"{key}: " + ", ".join(f"{k}={v}" for k, v in value.items()) + "\n")
        else:
            out.write(f"{key}: {value}\n")


def cmd_build(args) -> int:
    S, _, _ = load_set(args.set, args.n)
    for d in args.drop or []:
        S = S.without(_parse_drop(d))
    sys.stdout.write(S.to_text())
    return EXIT_OK


def _prepared(args):
    S, n, cid = load_set(args.set, args.n)
    for d in args.drop or []:
        try:
            S = S.without(_parse_drop(d))
        except KeyError:
            raise UsageError(f"--drop {d}: not in the set") from None
    field = _field(args.field)
    _check_char(cid, field, n)
    return S, n, field


def cmd_eval(args) -> int:
    S, n, cid = load_set(args.set, args.n)
    field = _field(args.field)
    p = Point.from_text(Path(args.point).read_text(), field)
    if p.n != n or p.m != S.m:
        raise UsageError(f"point is {p.n}x{p.m}, set needs {n}x{S.m}")
    values = fingerprint(S, p)
    record = {"values": {str(f): str(v) for f, v in zip(S, values)}}
    if args.output == "machine":
        emit(record, True)
    else:
        for f, v in zip(S, values):
            print(f"{f} = {v}")
    return EXIT_OK


def cmd_orbit(args) -> int:
    field = _field(args.field)
    p = Point.from_text(Path(args.p).read_text(), field)
    q = Point.from_text(Path(args.q).read_text(), field)
    try:
        same = same_orbit(p, q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    emit({"same_orbit": same}, args.output == "machine")
    return EXIT_OK if same else EXIT_NEGATIVE


def cmd_verify_separating(args) -> int:
    S, n, field = _prepared(args)
    d = _domain(args, n, S.m, field)
    report = verify_separating(S, d, jobs=args.jobs)
    emit({"command": "verify-separating", "domain": d.describe(), "set_size": len(S),
          **report.to_record()}, args.output == "machine")
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_verify_minimal(args) -> int:
    S, n, field = _prepared(args)
    d = _domain(args, n, S.m, field)
    report = verify_minimal(S, d, budget=args.budget, jobs=args.jobs)
    emit({"command": "verify-minimal", "domain": d.describe(), "set_size": len(S),
          **report.to_record()}, args.output == "machine")
    return EXIT_OK if report.all_witnessed else EXIT_NEGATIVE


def cmd_verify_expansion(args) -> int:
    field = _field(args.field)
    if not char_ok_for(field, args.n):
        raise UsageError(f"{field} violates char(K) = 0 or char(K) > n (n={args.n})")
    m0 = args.m0 if args.m0 is not None else m0_of(args.n)
    if m0 < m0_of(args.n):
        raise UsageError(f"--m0 must be at least floor(n/2)+1 = {m0_of(args.n)}")
    if args.m < m0:
        raise UsageError("--m must be >= --m0")
    d = _domain(args, args.n, args.m, field)
    report = verify_expansion_theorem(args.n, m0, args.m, d, jobs=args.jobs)
    emit({"command": "verify-expansion", "m0": m0, "domain": d.describe(),
          **report.to_record()}, args.output == "machine")
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_stats(args) -> int:
    n, m = args.n, args.m
    c, e = asymptotic_ratio_constant(n)
    sm, mm = count_S(n, m), count_M(n, m)
    record = {
        "n": n,
        "m": m,
        "m0": m0_of(n),
        "size_M": mm,
        "size_S": sm,
        "ratio": f"{sm}/{mm}",
        "scaled_ratio": float(sm * m ** e / mm),
        "asymptotic_constant": str(c),
        "asymptotic_exponent": e,
    }
    emit(record, args.output == "machine")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multisym", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_set=True):
        p.add_argument("--output", choices=("human", "machine"), default="human")
        if with_set:
            p.add_argument("--n", type=int, default=None, help="number of rows (required for set files)")

    p = sub.add_parser("build", help="print a catalog set in the invariant text format")
    p.add_argument("set", help="M:n:m, S:n:m, T:n:m, CX:S3 or a set file")
    p.add_argument("--drop", action="append", help="remove sigma_t(k), given as t:k1,k2,...")
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("eval", help="evaluate every invariant of a set at a point")
    p.add_argument("--set", required=True)
    p.add_argument("--point", required=True, help="point file: n lines of m entries")
    p.add_argument("--field", default="rational")
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("orbit", help="decide whether two points lie in one S_n orbit")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--field", default="rational")
    common(p, with_set=False)
    p.set_defaults(func=cmd_orbit)

    for name, func in (("verify-separating", cmd_verify_separating),
                       ("verify-minimal", cmd_verify_minimal),
                       ("verify-expansion", cmd_verify_expansion)):
        p = sub.add_parser(name)
        if name == "verify-expansion":
            p.add_argument("--n", type=int, required=True)
            p.add_argument("--m0", type=int, default=None)
            p.add_argument("--m", type=int, required=True)
            p.add_argument("--output", choices=("human", "machine"), default="human")
        else:
            p.add_argument("--set", required=True)
            p.add_argument("--drop", action="append", help="remove sigma_t(k), given as t:k1,k2,...")
            common(p)
        p.add_argument("--field", default="rational")
        p.add_argument("--coords", default=None, help="comma-separated coordinates (default: all of F_p)")
        p.add_argument("--samples", type=int, default=0, help="sample this many points instead of the full grid")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=1)
        if name == "verify-minimal":
            p.add_argument("--budget", type=int, default=2_000_000)
        p.set_defaults(func=func)

    p = sub.add_parser("stats", help="sizes of M_m and S_m and their asymptotic ratio")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--output", choices=("human", "machine"), default="human")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        emit({"error": "budget_exceeded", "detail": str(exc)}, getattr(args, "output", "human") == "machine")
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
