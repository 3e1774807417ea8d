"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 certified "no" (no stable
matching, or the given matching is blocked), 3 enumeration budget exceeded.
JSON payloads go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .instance import Instance, InstanceError, generate_random, parse_instance, serialize_instance
from .lattice import build_lattice, lattice_to_dict, lattice_to_dot
from .oracle import BudgetExceeded, EnumerationBudget, enumerate_matchings, enumerate_stable
from .polytope import (
    build_system,
    enumerate_extreme_points,
    format_rational,
    verify_polytope,
)
from .solver import Result, solve, trace_to_dict
from .stability import (
    MatchingError,
    blocking_edges,
    is_non_uniformly_stable,
    matching_pairs,
    parse_matching,
)

EXIT_OK, EXIT_INPUT, EXIT_NO, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_instance(path: str) -> Instance:
    return parse_instance(_read(path))


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _budget(args) -> EnumerationBudget:
    return EnumerationBudget(max_edges=args.max_edges)


def cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    out = solve(inst)
    payload: dict = {"result": out.result.value}
    if out.result is Result.STABLE:
        payload["matching"] = matching_pairs(inst, out.matching)
    else:
        print(
            f"no stable matching: edge {inst.edge_label(out.final_witness)} has an unmatched right endpoint",
            file=sys.stderr,
        )
    if args.trace:
        payload["trace"] = trace_to_dict(inst, out.trace)
        payload["deleted"] = sorted(out.deleted)
    _emit(payload)
    return EXIT_OK if out.result is Result.STABLE else EXIT_NO


def cmd_check(args) -> int:
    inst = _load_instance(args.instance)
    mu = parse_matching(inst, _read(args.matching))
    report = is_non_uniformly_stable(inst, mu)
    payload: dict = {"stable": report is None}
    if report is not None:
        payload["block"] = report.to_dict(inst)
        print(f"blocked by {inst.edge_label(report.edge)} ({report.mode.value})", file=sys.stderr)
    if args.all_blockers:
        payload["blockers"] = [r.to_dict(inst) for r in blocking_edges(inst, mu)]
    _emit(payload)
    return EXIT_OK if report is None else EXIT_NO


def cmd_enumerate(args) -> int:
    inst = _load_instance(args.instance)
    budget = _budget(args)
    found = enumerate_matchings(inst, budget) if args.all else enumerate_stable(inst, budget)
    _emit([matching_pairs(inst, mu) for mu in found])
    return EXIT_OK


def cmd_polytope(args) -> int:
    inst = _load_instance(args.instance)
    if args.action == "vertices":
        reports = enumerate_extreme_points(build_system(inst), args.vertex_enum_max, args.method, inst)
        _emit(
            [
                {
                    "point": [format_rational(c) for c in r.point],
                    "integral": r.integral,
                    "matching": None if r.matching is None else matching_pairs(inst, r.matching),
                }
                for r in reports
            ]
        )
        return EXIT_OK
    stable = enumerate_stable(inst, _budget(args))
    results = verify_polytope(inst, stable, args.vertex_enum_max, args.method)
    passed = all(r.passed for r in results)
    _emit(
        {
            "passed": passed,
            "properties": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
        }
    )
    for r in results:
        if not r.passed:
            print(f"FAILED {r.name}: {r.detail}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_INPUT


def cmd_lattice(args) -> int:
    inst = _load_instance(args.instance)
    lat = build_lattice(inst, _budget(args))
    if args.dot:
        Path(args.dot).write_text(lattice_to_dot(inst, lat), encoding="utf-8")
    if args.json:
        _emit(lattice_to_dict(inst, lat))
    else:
        _emit(
            {
                "order": "A <= B iff meet(A, B) = A; meets favour LEFT-side preferences",
                "stable_matchings": len(lat.matchings),
                "classes": lat.size,
                "hasse": [list(p) for p in lat.hasse],
            }
        )
    return EXIT_OK


def _probability(text: str) -> Fraction:
    try:
        p = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if not 0 <= p <= 1:
        raise argparse.ArgumentTypeError(f"probability {text} outside [0, 1]")
    return p


def _count(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def cmd_gen(args) -> int:
    inst = generate_random(args.seed, args.n1, args.n2, args.edge_prob, args.tie_prob, args.strong_prob)
    text = serialize_instance(inst)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nustable", description="Non-uniformly stable matchings in bipartite graphs with ties."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide existence and construct a stable matching")
    p.add_argument("instance")
    p.add_argument("--trace", action="store_true", help="include the round-by-round trace")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="check a matching for stability")
    p.add_argument("instance")
    p.add_argument("matching")
    p.add_argument("--all-blockers", action="store_true", help="list every blocking edge")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("enumerate", help="list all stable matchings by brute force")
    p.add_argument("instance")
    p.add_argument("--all", action="store_true", help="list every matching, not only stable ones")
    p.add_argument("--max-edges", type=_count, default=20)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("polytope", help="inequality description of the stable matching polytope")
    p.add_argument("action", choices=["verify", "vertices"])
    p.add_argument("instance")
    p.add_argument("--vertex-enum-max", type=_count, default=8)
    p.add_argument("--max-edges", type=_count, default=20)
    p.add_argument("--method", choices=["dd", "basis"], default="dd")
    p.set_defaults(func=cmd_polytope)

    p = sub.add_parser("lattice", help="lattice of stable matching classes")
    p.add_argument("instance")
    p.add_argument("--dot", metavar="PATH", help="write the Hasse diagram in DOT format")
    p.add_argument("--json", action="store_true", help="dump classes and meet/join tables")
    p.add_argument("--max-edges", type=_count, default=20)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("gen", help="write a seeded random instance")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n1", type=_count, default=3)
    p.add_argument("--n2", type=_count, default=3)
    p.add_argument("--edge-prob", type=_probability, default=Fraction(1, 2))
    p.add_argument("--tie-prob", type=_probability, default=Fraction(1, 3))
    p.add_argument("--strong-prob", type=_probability, default=Fraction(1, 2))
    p.add_argument("-o", "--output", metavar="PATH")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except (UsageError, InstanceError, MatchingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
