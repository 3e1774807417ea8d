"""Linear description of the stable matching polytope, in exact rationals.

Variables are indexed by edge id.  Rows come in four families:

* VERTEX(v):        x(E(v)) <= 1
* SUPER_EDGE(e):    x(e) + sum over both ends v of x(edges v strictly prefers to e) >= 1
* STRONG_PAIR(e,v): x(edges tied with e at v) + sum over both ends w of
                    x(edges w strictly prefers to e) >= 1
* NONNEG(e):        x(e) >= 0

No floating point is used anywhere in this module.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import gcd
from typing import Optional, Sequence

from .instance import EdgeKind, Instance, Side, VertexId
from .oracle import BudgetExceeded
from .stability import Matching, MatchingError

Vector = tuple[Fraction, ...]


class Sense(enum.Enum):
    LE = "<="
    GE = ">="


class RowKind(enum.Enum):
    VERTEX = "vertex"
    SUPER_EDGE = "super_edge"
    STRONG_PAIR = "strong_pair"
    NONNEG = "nonneg"


@dataclass(frozen=True)
class RowTag:
    kind: RowKind
    edge: Optional[int] = None
    vertex: Optional[VertexId] = None

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind.value}
        if self.edge is not None:
            out["edge"] = self.edge
        if self.vertex is not None:
            out["vertex"] = self.vertex.name
            out["side"] = self.vertex.side.value
        return out


@dataclass(frozen=True)
class Row:
    coeffs: Vector
    sense: Sense
    rhs: Fraction
    tag: RowTag

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * xi for c, xi in zip(self.coeffs, x) if c), Fraction(0))

    def holds(self, x: Sequence[Fraction]) -> bool:
        val = self.lhs(x)
        return val <= self.rhs if self.sense is Sense.LE else val >= self.rhs


@dataclass(frozen=True)
class ConstraintSystem:
    num_vars: int
    rows: tuple[Row, ...]

    def count(self, kind: RowKind) -> int:
        return sum(1 for r in self.rows if r.tag.kind is kind)


@dataclass(frozen=True)
class VertexReport:
    point: Vector
    tight_rows: tuple[int, ...]
    integral: bool
    matching: Optional[Matching]


ZERO, ONE = Fraction(0), Fraction(1)


def build_system(inst: Instance) -> ConstraintSystem:
    m = inst.m
    rows: list[Row] = []

    def indicator(ids) -> Vector:
        ids = set(ids)
        return tuple(ONE if i in ids else ZERO for i in range(m))

    def strictly_better(side: Side, eid: int) -> list[int]:
        e = inst.edges[eid]
        incident = inst.incident_left[e.u] if side is Side.LEFT else inst.incident_right[e.w]
        r = e.rank_at(side)
        return [f for f in incident if inst.edges[f].rank_at(side) < r]

    def tied(side: Side, eid: int) -> list[int]:
        e = inst.edges[eid]
        incident = inst.incident_left[e.u] if side is Side.LEFT else inst.incident_right[e.w]
        r = e.rank_at(side)
        return [f for f in incident if inst.edges[f].rank_at(side) == r]

    for v in inst.vertices():
        rows.append(Row(indicator(inst.incident(v)), Sense.LE, ONE, RowTag(RowKind.VERTEX, vertex=v)))

    for e in inst.edges:
        above = strictly_better(Side.LEFT, e.id) + strictly_better(Side.RIGHT, e.id)
        if e.kind is EdgeKind.SUPER:
            rows.append(
                Row(indicator([e.id] + above), Sense.GE, ONE, RowTag(RowKind.SUPER_EDGE, edge=e.id))
            )
        else:
            for side in (Side.LEFT, Side.RIGHT):
                v = inst.vertex(side, e.endpoint(side))
                rows.append(
                    Row(
                        indicator(tied(side, e.id) + above),
                        Sense.GE,
                        ONE,
                        RowTag(RowKind.STRONG_PAIR, edge=e.id, vertex=v),
                    )
                )

    for e in inst.edges:
        rows.append(Row(indicator([e.id]), Sense.GE, ZERO, RowTag(RowKind.NONNEG, edge=e.id)))
    return ConstraintSystem(m, tuple(rows))


def check_point(sys: ConstraintSystem, x: Sequence[Fraction | int]) -> list[RowTag]:
    """Tags of every row ``x`` violates; empty exactly when ``x`` lies in the polytope."""
    if len(x) != sys.num_vars:
        raise ValueError(f"point has dimension {len(x)}, system has {sys.num_vars} variables")
    x = [Fraction(v) for v in x]
    return [r.tag for r in sys.rows if not r.holds(x)]


def characteristic(inst: Instance, ids) -> Vector:
    ids = set(ids)
    return tuple(ONE if i in ids else ZERO for i in range(inst.m))


def integral_points_of_S(inst: Instance, max_edges: int = 20) -> list[Vector]:
    """All 0/1 points of the polytope, in lexicographic order of the vectors."""
    if inst.m > max_edges:
        raise BudgetExceeded(f"{inst.m} edges exceeds the 0/1 sweep limit of {max_edges}")
    sys = build_system(inst)
    out = []
    for bits in product((ZERO, ONE), repeat=inst.m):
        if not check_point(sys, bits):
            out.append(tuple(bits))
    return out


# ---------------------------------------------------------------------------
# Exact linear algebra


def solve_exact(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Optional[list[Fraction]]:
    """Unique solution of ``A y = b``, or ``None`` if inconsistent or underdetermined.

    Gauss-Jordan elimination over the rationals, pivoting on the first
    nonzero entry of each column.
    """
    rows = [list(map(Fraction, r)) + [Fraction(bi)] for r, bi in zip(A, b)]
    n = len(A[0]) if A else 0
    pivot_row = 0
    for col in range(n):
        piv = next((r for r in range(pivot_row, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            return None
        rows[pivot_row], rows[piv] = rows[piv], rows[pivot_row]
        p = rows[pivot_row]
        inv = 1 / p[col]
        for k in range(col, n + 1):
            p[k] *= inv
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col] != 0:
                f = rows[r][col]
                rr = rows[r]
                for k in range(col, n + 1):
                    rr[k] -= f * p[k]
        pivot_row += 1
    if any(rows[r][n] != 0 for r in range(pivot_row, len(rows))):
        return None
    return [rows[r][n] for r in range(n)]


# ---------------------------------------------------------------------------
# Extreme points


def _report(sys: ConstraintSystem, point: Vector, matching_of) -> VertexReport:
    tight = tuple(k for k, r in enumerate(sys.rows) if r.lhs(point) == r.rhs)
    integral = all(c in (ZERO, ONE) for c in point)
    matching = matching_of(point) if integral else None
    return VertexReport(point, tight, integral, matching)


def _hyperplanes(sys: ConstraintSystem) -> list[tuple[Vector, Fraction]]:
    seen: dict[tuple[Vector, Fraction], None] = {}
    for r in sys.rows:
        if any(r.coeffs):
            seen.setdefault((r.coeffs, r.rhs), None)
    return list(seen)


def _basis_vertices(sys: ConstraintSystem) -> set[Vector]:
    """Tight-row basis enumeration: every nonsingular n-subset of rows, solved and filtered.

    Row subsets are grown in index order with an incremental echelon form, so a
    prefix containing a dependent row is abandoned together with all its extensions.
    """
    n = sys.num_vars
    planes = _hyperplanes(sys)
    found: set[Vector] = set()
    if n == 0:
        if all(r.holds(()) for r in sys.rows):
            found.add(())
        return found

    def reduce(echelon: list[tuple[int, list[Fraction]]], row: list[Fraction]):
        row = list(row)
        for pc, prow in echelon:
            f = row[pc]
            if f:
                for k in range(n + 1):
                    row[k] -= f * prow[k]
        pc = next((k for k in range(n) if row[k]), None)
        if pc is None:
            return None
        inv = 1 / row[pc]
        return pc, [c * inv for c in row]

    def back_substitute(echelon: list[tuple[int, list[Fraction]]]) -> Vector:
        rows = {pc: list(r) for pc, r in echelon}
        for pc in sorted(rows, reverse=True):
            r = rows[pc]
            for other_pc, other in rows.items():
                if other_pc != pc and other[pc]:
                    f = other[pc]
                    for k in range(n + 1):
                        other[k] -= f * r[k]
        return tuple(rows[c][n] for c in range(n))

    def rec(start: int, echelon: list[tuple[int, list[Fraction]]]) -> None:
        if len(echelon) == n:
            x = back_substitute(echelon)
            if all(r.holds(x) for r in sys.rows):
                found.add(x)
            return
        for k in range(start, len(planes) - (n - len(echelon)) + 1):
            coeffs, rhs = planes[k]
            red = reduce(echelon, list(coeffs) + [rhs])
            if red is None:
                continue
            rec(k + 1, echelon + [red])

    rec(0, [])
    return found


def _dd_vertices(sys: ConstraintSystem) -> set[Vector]:
    """Double description on the homogenized cone, in integer arithmetic.

    Coordinates are (x0, x_0, ..., x_{n-1}); each row a.x >= b becomes
    a.x - b*x0 >= 0.  The start cone is the nonnegative orthant, whose
    facets are x0 >= 0 and the NONNEG rows.
    """
    n = sys.num_vars
    d = n + 1
    ineqs: list[tuple[int, ...]] = []
    for r in sys.rows:
        if r.tag.kind is RowKind.NONNEG:
            continue
        sign = 1 if r.sense is Sense.GE else -1
        coeffs = [sign * c for c in r.coeffs]
        rhs = sign * r.rhs
        den = 1
        for c in coeffs + [rhs]:
            den = den * c.denominator // gcd(den, c.denominator)
        h = tuple([int(-rhs * den)] + [int(c * den) for c in coeffs])
        if any(h) and h not in ineqs:
            ineqs.append(h)

    # ray -> bitmask of satisfied-with-equality constraints (bits 0..d-1 are the orthant facets)
    rays: dict[tuple[int, ...], int] = {}
    full = (1 << d) - 1
    for j in range(d):
        unit = tuple(1 if k == j else 0 for k in range(d))
        rays[unit] = full & ~(1 << j)

    for idx, h in enumerate(ineqs):
        bit = 1 << (d + idx)
        vals = {r: sum(a * b for a, b in zip(h, r)) for r in rays}
        pos = [r for r in rays if vals[r] > 0]
        neg = [r for r in rays if vals[r] < 0]
        new: dict[tuple[int, ...], int] = {}
        for r in rays:
            if vals[r] > 0:
                new[r] = rays[r]
            elif vals[r] == 0:
                new[r] = rays[r] | bit
        if neg and pos:
            items = list(rays.items())
            for p in pos:
                zp = rays[p]
                for q in neg:
                    common = zp & rays[q]
                    if any(
                        (common & z) == common for t, z in items if t is not p and t is not q
                    ):
                        continue
                    hp, hq = vals[p], -vals[q]
                    ray = [hp * b + hq * a for a, b in zip(p, q)]
                    g = 0
                    for c in ray:
                        g = gcd(g, c)
                    ray_t = tuple(c // g for c in ray)
                    new[ray_t] = common | bit
        rays = new
        if not rays:
            break

    out: set[Vector] = set()
    for r in rays:
        if r[0] > 0:
            out.add(tuple(Fraction(c, r[0]) for c in r[1:]))
    return out


def enumerate_extreme_points(
    sys: ConstraintSystem,
    max_vars: int = 8,
    method: str = "dd",
    inst: Optional[Instance] = None,
) -> list[VertexReport]:
    """Extreme points of the polytope, sorted by coordinates.

    ``method`` is ``"basis"`` (every nonsingular tight-row subset) or ``"dd"``
    (double description).  Both are exact; they are cross-checked in tests.
    When ``inst`` is given, integral points carry their matching.
    """
    if sys.num_vars > max_vars:
        raise BudgetExceeded(f"{sys.num_vars} variables exceeds the vertex enumeration limit of {max_vars}")
    if method == "basis":
        points = _basis_vertices(sys)
    elif method == "dd":
        points = _dd_vertices(sys)
    else:
        raise ValueError(f"unknown method {method!r}")

    def matching_of(point: Vector) -> Optional[Matching]:
        if inst is None:
            return None
        try:
            return Matching.from_edges(inst, [i for i, c in enumerate(point) if c == ONE])
        except MatchingError:
            return None

    return [_report(sys, p, matching_of) for p in sorted(points)]


# ---------------------------------------------------------------------------
# Convex hull of stable characteristic vectors


def hull_membership(
    inst: Instance, x: Sequence[Fraction | int], stable_set: Sequence[Matching]
) -> Optional[list[Fraction]]:
    """Convex weights over ``stable_set`` reproducing ``x``, or ``None``.

    Searches basic solutions over column subsets of increasing size; a
    feasible combination, when one exists, has linearly independent support.
    """
    x = [Fraction(v) for v in x]
    if len(x) != inst.m:
        raise ValueError(f"point has dimension {len(x)}, instance has {inst.m} edges")
    vecs = [characteristic(inst, mu.pairs) for mu in stable_set]
    for size in range(1, len(vecs) + 1):
        for cols in combinations(range(len(vecs)), size):
            A = [[vecs[c][i] for c in cols] for i in range(inst.m)] + [[ONE] * size]
            sol = solve_exact(A, x + [ONE])
            if sol is None or any(s < 0 for s in sol):
                continue
            weights = [ZERO] * len(vecs)
            for c, s in zip(cols, sol):
                weights[c] = s
            return weights
    return None


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


# ---------------------------------------------------------------------------
# Desk-scale verification that the inequality system describes the stable hull


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    detail: str = ""


def verify_polytope(
    inst: Instance,
    stable: Sequence[Matching],
    vertex_enum_max: int = 8,
    method: str = "dd",
) -> list[PropertyResult]:
    """Compare the inequality system against an exhaustive list of stable matchings."""
    sys = build_system(inst)
    stable_vecs = {characteristic(inst, mu.pairs) for mu in stable}
    stable_sets = {mu.pairs for mu in stable}
    results = []

    bad = [sorted(mu.pairs) for mu in stable if check_point(sys, characteristic(inst, mu.pairs))]
    results.append(
        PropertyResult(
            "stable_vectors_feasible",
            not bad,
            f"infeasible stable vectors: {bad}" if bad else f"{len(stable)} stable vectors satisfy every row",
        )
    )

    integral = set(integral_points_of_S(inst))
    results.append(
        PropertyResult(
            "integral_points_are_stable_vectors",
            integral == stable_vecs,
            f"{len(integral)} integral points, {len(stable_vecs)} stable vectors",
        )
    )

    vertices = enumerate_extreme_points(sys, vertex_enum_max, method, inst)
    off = [
        [format_rational(c) for c in r.point]
        for r in vertices
        if not r.integral or r.matching is None or r.matching.pairs not in stable_sets
    ]
    results.append(
        PropertyResult(
            "extreme_points_are_stable_vectors",
            not off,
            f"non-stable extreme points: {off}" if off else f"{len(vertices)} extreme points, all stable",
        )
    )

    points = {r.point for r in vertices}
    missing = [sorted(mu.pairs) for mu in stable if characteristic(inst, mu.pairs) not in points]
    results.append(
        PropertyResult(
            "stable_vectors_are_extreme_points",
            not missing,
            f"stable matchings missing from vertex list: {missing}" if missing else "",
        )
    )

    results.append(
        PropertyResult(
            "empty_iff_no_stable_matching",
            (not vertices) == (not stable),
            f"{len(vertices)} extreme points, {len(stable)} stable matchings",
        )
    )
    return results
