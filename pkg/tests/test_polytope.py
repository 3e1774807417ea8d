import random
from fractions import Fraction

import pytest

from nustable import Instance, generate_random
from nustable.oracle import BudgetExceeded, enumerate_stable
from nustable.polytope import (
    RowKind,
    Sense,
    build_system,
    characteristic,
    check_point,
    enumerate_extreme_points,
    format_rational,
    hull_membership,
    integral_points_of_S,
    parse_rational,
    solve_exact,
    verify_polytope,
)

from .corpora import random_family, strict_family

H = Fraction(1, 2)


def _counts(sys):
    return {k: sys.count(k) for k in RowKind}


def test_row_counts(i1, i3, i2):
    assert _counts(build_system(i3)) == {
        RowKind.VERTEX: 4,
        RowKind.SUPER_EDGE: 0,
        RowKind.STRONG_PAIR: 8,
        RowKind.NONNEG: 4,
    }
    assert _counts(build_system(i2))[RowKind.STRONG_PAIR] == 0
    rows = build_system(i1).rows
    assert [(r.coeffs, r.sense, r.rhs) for r in rows] == [
        ((1,), Sense.LE, 1),
        ((1,), Sense.LE, 1),
        ((1,), Sense.GE, 1),
        ((1,), Sense.GE, 0),
    ]


def test_coefficient_patterns(strict22):
    sys = build_system(strict22)
    super_rows = {r.tag.edge: r.coeffs for r in sys.rows if r.tag.kind is RowKind.SUPER_EDGE}
    # edge 1 = m1w2: m1 prefers m1w1 (0); w2 ranks m1 first, nothing above
    assert super_rows[1] == (1, 1, 0, 0)
    # edge 2 = m2w1: m2 prefers m2w2 (3); w1 ranks m2 first
    assert super_rows[2] == (0, 0, 1, 1)
    # edge 0 = m1w1: w1 prefers m2w1 (2)
    assert super_rows[0] == (1, 0, 1, 0)


def test_check_point_examples(i1, i3):
    s3 = build_system(i3)
    assert check_point(s3, characteristic(i3, {0, 3})) == []
    assert check_point(s3, characteristic(i3, {1, 2})) == []
    assert check_point(s3, [H, H, H, H]) == []
    s1 = build_system(i1)
    assert [t.kind for t in check_point(s1, [0])] == [RowKind.SUPER_EDGE]
    with pytest.raises(ValueError):
        check_point(s1, [0, 0])


def test_integral_points_examples(i1, i2, i3):
    assert integral_points_of_S(i3) == [characteristic(i3, {1, 2}), characteristic(i3, {0, 3})]
    assert integral_points_of_S(i2) == []
    assert integral_points_of_S(i1) == [(Fraction(1),)]


@pytest.mark.parametrize("method", ["dd", "basis"])
def test_extreme_point_examples(i1, i2, i3, method):
    (only,) = enumerate_extreme_points(build_system(i1), method=method, inst=i1)
    assert only.point == (1,) and only.integral and only.matching.pairs == {0}
    reps = enumerate_extreme_points(build_system(i3), method=method, inst=i3)
    assert [r.matching.pairs for r in reps] == [{1, 2}, {0, 3}]
    assert all(r.integral for r in reps)
    assert enumerate_extreme_points(build_system(i2), method=method, inst=i2) == []


def test_extreme_points_report_tight_rows(i1):
    (only,) = enumerate_extreme_points(build_system(i1), inst=i1)
    assert only.tight_rows == (0, 1, 2)


def test_vertex_enumeration_limit():
    inst = generate_random(1, 3, 3, edge_prob=1)
    with pytest.raises(BudgetExceeded):
        enumerate_extreme_points(build_system(inst), max_vars=8)


def test_basis_and_dd_agree():
    checked = 0
    for inst in random_family(60, 3, 6, seed=5):
        sys = build_system(inst)
        a = enumerate_extreme_points(sys, method="basis", inst=inst)
        b = enumerate_extreme_points(sys, method="dd", inst=inst)
        assert a == b
        checked += 1
    assert checked == 60


def test_basis_and_dd_agree_on_fractional_vertices():
    # plain system with a fractional vertex, to exercise the non-integral path
    from nustable.polytope import ConstraintSystem, Row, RowTag

    tag = RowTag(RowKind.VERTEX)
    rows = (
        Row((Fraction(2), Fraction(1)), Sense.LE, Fraction(2), tag),
        Row((Fraction(1), Fraction(3)), Sense.LE, Fraction(3), tag),
        Row((Fraction(1), Fraction(0)), Sense.GE, Fraction(0), RowTag(RowKind.NONNEG, edge=0)),
        Row((Fraction(0), Fraction(1)), Sense.GE, Fraction(0), RowTag(RowKind.NONNEG, edge=1)),
    )
    sys = ConstraintSystem(2, rows)
    pts = [r.point for r in enumerate_extreme_points(sys, method="basis")]
    assert pts == [r.point for r in enumerate_extreme_points(sys, method="dd")]
    assert pts == sorted([(0, 0), (0, 1), (1, 0), (Fraction(3, 5), Fraction(4, 5))])
    assert [r.integral for r in enumerate_extreme_points(sys)] == [True, True, False, True]


def test_solve_exact():
    assert solve_exact([[2, 1], [1, 3]], [2, 3]) == [Fraction(3, 5), Fraction(4, 5)]
    assert solve_exact([[1, 1], [2, 2]], [1, 2]) is None  # underdetermined
    assert solve_exact([[1], [1]], [1, 2]) is None  # inconsistent
    assert solve_exact([[0, 1], [1, 0], [1, 1]], [1, 2, 3]) == [2, 1]


def test_hull_membership_examples(i3):
    stable = enumerate_stable(i3)
    assert hull_membership(i3, [H, H, H, H], stable) == [H, H]
    assert hull_membership(i3, characteristic(i3, stable[1].pairs), stable) == [0, 1]
    assert hull_membership(i3, [2, 0, 0, 0], stable) is None


def test_rational_format():
    assert format_rational(Fraction(1)) == "1/1"
    assert format_rational(Fraction(-3, 6)) == "-1/2"
    assert parse_rational("3/4") == Fraction(3, 4)


def test_convex_combinations_of_stable_vectors_are_feasible():
    rng = random.Random(8)
    seen = 0
    for inst in strict_family(300, 3, 8, seed=41):
        stable = enumerate_stable(inst)
        if len(stable) < 2:
            continue
        seen += 1
        sys = build_system(inst)
        weights = [Fraction(rng.randint(1, 9)) for _ in stable]
        total = sum(weights)
        x = [sum(w * (1 if i in mu.pairs else 0) for w, mu in zip(weights, stable)) / total for i in range(inst.m)]
        assert check_point(sys, x) == []
        lam = hull_membership(inst, x, stable)
        assert lam is not None and sum(lam) == 1 and min(lam) >= 0
    assert seen > 10


def test_verify_polytope_on_small_examples(i1, i2, i3, strict22):
    for inst in (i1, i2, i3, strict22):
        results = verify_polytope(inst, enumerate_stable(inst))
        assert all(r.passed for r in results), results


def test_verify_polytope_flags_a_wrong_stable_list(i3):
    stable = enumerate_stable(i3)[:1]
    failed = {r.name for r in verify_polytope(i3, stable) if not r.passed}
    assert failed == {"integral_points_are_stable_vectors", "extreme_points_are_stable_vectors"}
