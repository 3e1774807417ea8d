"""Exit criteria: exhaustive and seeded-random sweeps, all exact.

Each test records a one-line verdict that the terminal summary prints as
``[PASS]`` or ``[FAIL]`` per criterion.
"""

from __future__ import annotations

import random
import subprocess
import sys
import time
from dataclasses import dataclass
from itertools import product
from pathlib import Path

import pytest

from nustable import Instance, Matching, Result, generate_random, is_non_uniformly_stable, serialize_instance, solve
from nustable.lattice import build_lattice, covered_vertices, decompose_cycles, join, meet
from nustable.oracle import (
    brute_minimal_minimizer,
    enumerate_stable,
    strongly_stable_matchings,
    super_stable_matchings,
)
from nustable.polytope import build_system, characteristic, check_point, verify_polytope
from nustable.solver import SolveOutcome, minimal_deficiency_set

from .conftest import ACCEPTANCE
from .corpora import exhaustive_2x2, random_family, rekind, strict_family

RANDOM_COUNT = 10_000
POLYTOPE_COUNT = 500


@dataclass
class Record:
    inst: Instance
    outcome: SolveOutcome
    stable: list[Matching]


@pytest.fixture(scope="module")
def corpus():
    start = time.perf_counter()
    records = []
    for inst in list(exhaustive_2x2()) + list(random_family(RANDOM_COUNT, 4, 12, seed=2024)):
        records.append(Record(inst, solve(inst), enumerate_stable(inst)))
    return records, time.perf_counter() - start


@pytest.fixture(scope="module")
def polytope_corpus():
    return list(random_family(POLYTOPE_COUNT, 4, 8, seed=77)) + list(strict_family(200, 3, 8, seed=78))


def record(num: int, passed: bool, detail: str) -> None:
    ACCEPTANCE[num] = (passed, detail)
    assert passed, detail


def test_criterion_1_solver_matches_oracle(corpus):
    records, elapsed = corpus
    exhaustive = sum(1 for r in records if r.inst.n1 == r.inst.n2 == 2 and r.inst.m <= 4)
    wrong_existence = [r for r in records if (r.outcome.result is Result.STABLE) != bool(r.stable)]
    unstable = [
        r
        for r in records
        if r.outcome.matching is not None and is_non_uniformly_stable(r.inst, r.outcome.matching) is not None
    ]
    n_random = len(records) - 6561
    yes = sum(bool(r.stable) for r in records)
    record(
        1,
        not wrong_existence and not unstable and n_random >= RANDOM_COUNT and elapsed < 300,
        f"{len(records)} instances (6561 exhaustive 2x2, {n_random} random), {yes} with a stable matching; "
        f"{len(wrong_existence)} existence mismatches, {len(unstable)} unstable outputs; {elapsed:.1f}s",
    )
    assert exhaustive >= 6561


def test_criterion_2_stable_matchings_avoid_deleted_edges(corpus):
    records, _ = corpus
    bad = [(r.inst, s) for r in records for s in r.stable if s.pairs & r.outcome.deleted]
    checked = sum(len(r.stable) for r in records)
    record(2, not bad, f"{checked} stable matchings checked against final deleted sets; {len(bad)} intersect")


def test_criterion_3_deficiency_set_matches_brute_force():
    rng = random.Random(303)
    start = time.perf_counter()
    mismatches = 0
    for _ in range(1000):
        n1, n2 = rng.randint(1, 10), rng.randint(1, 10)
        density = rng.random()
        pairs = [(u, w) for u in range(n1) for w in range(n2) if rng.random() < density]
        inst = Instance.build(n1, n2, [(u, w, "super", 1, 1) for u, w in pairs])
        F = range(inst.m)
        if minimal_deficiency_set(inst, F) != brute_minimal_minimizer(inst, F, limit=10):
            mismatches += 1
    elapsed = time.perf_counter() - start
    record(3, mismatches == 0 and elapsed < 60, f"1000 random edge sets, {mismatches} mismatches; {elapsed:.1f}s")


def test_criterion_4_specialization(corpus):
    records, _ = corpus
    bad = 0
    for r in records:
        for kind, oracle in (("super", super_stable_matchings), ("strong", strongly_stable_matchings)):
            inst = rekind(r.inst, kind)
            expected = oracle(inst)
            out = solve(inst)
            if (out.result is Result.STABLE) != bool(expected):
                bad += 1
            elif out.matching is not None and out.matching.sorted_ids() not in expected:
                bad += 1
    record(4, bad == 0, f"{2 * len(records)} all-SUPER / all-STRONG variants; {bad} disagreements")


def test_criterion_5_polytope_vertices_are_stable_matchings(polytope_corpus):
    start = time.perf_counter()
    failures = []
    with_stable = 0
    for inst in polytope_corpus:
        stable = enumerate_stable(inst)
        with_stable += bool(stable)
        results = verify_polytope(inst, stable, vertex_enum_max=8)
        failures += [(serialize_instance(inst), r) for r in results if not r.passed]
    elapsed = time.perf_counter() - start
    record(
        5,
        not failures and elapsed < 600,
        f"{len(polytope_corpus)} instances with |E| <= 8 ({with_stable} with stable matchings); "
        f"{len(failures)} property failures; {elapsed:.1f}s",
    )


def test_criterion_6_stable_vectors_satisfy_all_rows(corpus, polytope_corpus):
    records, _ = corpus
    pool = [(r.inst, r.stable) for r in records] + [(i, enumerate_stable(i)) for i in polytope_corpus]
    checked = bad = 0
    for inst, stable in pool:
        if not stable:
            continue
        sys_ = build_system(inst)
        for mu in stable:
            checked += 1
            bad += bool(check_point(sys_, characteristic(inst, mu.pairs)))
    record(6, bad == 0, f"{checked} stable characteristic vectors over {len(pool)} instances; {bad} violate a row")


def test_criterion_7_lattice_structure(corpus):
    records, _ = corpus
    multi = [r for r in records if len(r.stable) >= 2]
    problems: list[str] = []
    classes_seen = 0
    for r in multi:
        inst, stable = r.inst, r.stable
        for a, b in product(stable, repeat=2):
            for op in (meet, join):
                if is_non_uniformly_stable(inst, op(inst, a, b)) is not None:
                    problems.append(f"closure {op.__name__}")
            try:
                dec = decompose_cycles(inst, a, b)
            except AssertionError as exc:
                problems.append(f"cycles: {exc}")
                continue
            if sum(len(c.edges) for c in dec.cycles) != len(a.pairs ^ b.pairs):
                problems.append("cycles do not cover the symmetric difference")
        if len({covered_vertices(inst, mu) for mu in stable}) != 1:
            problems.append("covered vertex sets differ")
        try:
            classes_seen += build_lattice(inst).size
        except AssertionError as exc:
            problems.append(f"lattice: {exc}")
    record(
        7,
        not problems,
        f"{len(multi)} instances with >= 2 stable matchings ({classes_seen} classes); {len(problems)} problems",
    )


def _cli(*args: str) -> bytes:
    return subprocess.run(
        [sys.executable, "-m", "nustable", *args], capture_output=True, check=False
    ).stdout


def test_criterion_8_cli_is_deterministic(tmp_path):
    inst = generate_random(4, 3, 3, edge_prob=0.8, tie_prob=0.3, strong_prob=0.5)
    strict = next(i for i in strict_family(200, 3, 8, seed=9) if len(enumerate_stable(i)) >= 2)
    ipath, spath = tmp_path / "inst.json", tmp_path / "strict.json"
    ipath.write_text(serialize_instance(inst))
    spath.write_text(serialize_instance(strict))
    mpath = tmp_path / "m.json"
    mpath.write_text('{"pairs": [{"u": "m1", "w": "w1"}]}')

    commands = {
        "solve": ["solve", str(ipath), "--trace"],
        "check": ["check", str(ipath), str(mpath), "--all-blockers"],
        "enumerate": ["enumerate", str(ipath), "--all"],
        "polytope verify": ["polytope", "verify", str(spath)],
        "polytope vertices": ["polytope", "vertices", str(spath)],
        "lattice": ["lattice", str(spath), "--json", "--dot", str(tmp_path / "l.dot")],
        "gen": ["gen", "--seed", "7", "--n1", "4", "--n2", "3"],
    }
    differing = []
    for name, argv in commands.items():
        first = _cli(*argv)
        dot_first = (tmp_path / "l.dot").read_bytes() if name == "lattice" else b""
        second = _cli(*argv)
        dot_second = (tmp_path / "l.dot").read_bytes() if name == "lattice" else b""
        if not first or first != second or dot_first != dot_second:
            differing.append(name)
    record(8, not differing, f"{len(commands)} commands run twice; differing payloads: {differing or 'none'}")
