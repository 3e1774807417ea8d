"""Structure of the set of stable matchings: covered vertices, cycles, meet/join, lattice."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from itertools import product
from typing import Optional

from .instance import Instance, Pref, Side, VertexId, compare_ranks
from .oracle import EnumerationBudget, enumerate_stable
from .stability import Matching, MatchingError, is_non_uniformly_stable, matching_pairs


class LatticeError(AssertionError):
    """A structural property that must hold for stable matchings failed."""


class NotStableError(ValueError):
    pass


def _left_rank(inst: Instance, mu: Matching, v: int) -> Optional[int]:
    eid = mu.partner_left.get(v)
    return None if eid is None else inst.edges[eid].rank_u


def _require_stable(inst: Instance, *ms: Matching) -> None:
    for mu in ms:
        report = is_non_uniformly_stable(inst, mu)
        if report is not None:
            raise NotStableError(f"matching {sorted(mu.pairs)} is blocked by edge {report.edge}")


def _combine(inst: Instance, mu: Matching, sigma: Matching, take_better: bool) -> Matching:
    chosen = []
    for v in range(inst.n1):
        c = compare_ranks(_left_rank(inst, mu, v), _left_rank(inst, sigma, v))
        if take_better:
            use_mu = c is not Pref.STRICTLY_WORSE
        else:
            use_mu = c is not Pref.STRICTLY_BETTER
        eid = (mu if use_mu else sigma).partner_left.get(v)
        if eid is not None:
            chosen.append(eid)
    try:
        return Matching.from_edges(inst, chosen)
    except MatchingError as exc:
        raise LatticeError(f"meet/join produced a non-matching: {exc}") from None


def meet(inst: Instance, mu: Matching, sigma: Matching, check: bool = True) -> Matching:
    """Each LEFT vertex keeps the partner it weakly prefers; ties go to ``mu``."""
    if check:
        _require_stable(inst, mu, sigma)
    return _combine(inst, mu, sigma, take_better=True)


def join(inst: Instance, mu: Matching, sigma: Matching, check: bool = True) -> Matching:
    """Each LEFT vertex keeps the partner it weakly disprefers; ties go to ``mu``."""
    if check:
        _require_stable(inst, mu, sigma)
    return _combine(inst, mu, sigma, take_better=False)


def covered_vertices(inst: Instance, mu: Matching) -> frozenset[VertexId]:
    out = set()
    for eid in mu.pairs:
        e = inst.edges[eid]
        out.add(inst.vertex(Side.LEFT, e.u))
        out.add(inst.vertex(Side.RIGHT, e.w))
    return frozenset(out)


# ---------------------------------------------------------------------------
# Cycles of the symmetric difference


class CycleClass(enum.Enum):
    C1 = "C1"  # every vertex strictly prefers the outgoing edge
    C2 = "C2"  # every vertex strictly prefers the incoming edge
    C3 = "C3"  # every vertex is indifferent


@dataclass(frozen=True)
class Cycle:
    vertices: tuple[VertexId, ...]  # closed walk, first == last
    edges: tuple[int, ...]  # edges[l] joins vertices[l] and vertices[l+1]
    cls: CycleClass


@dataclass(frozen=True)
class CycleDecomposition:
    cycles: tuple[Cycle, ...]


def decompose_cycles(inst: Instance, mu: Matching, sigma: Matching) -> CycleDecomposition:
    """Split the symmetric difference of two stable matchings into classified cycles.

    Each component is walked from its lowest vertex (LEFT before RIGHT, then
    by index), leaving along its ``mu`` edge.
    """
    diff = mu.pairs ^ sigma.pairs
    adj: dict[tuple[int, int], list[int]] = {}
    for eid in diff:
        e = inst.edges[eid]
        adj.setdefault((0, e.u), []).append(eid)
        adj.setdefault((1, e.w), []).append(eid)
    for key, inc in adj.items():
        if len(inc) != 2:
            raise LatticeError(f"symmetric difference has a path ending at {key}")

    def other_end(key: tuple[int, int], eid: int) -> tuple[int, int]:
        e = inst.edges[eid]
        return (1, e.w) if key == (0, e.u) else (0, e.u)

    def vid(key: tuple[int, int]) -> VertexId:
        return inst.vertex(Side.LEFT if key[0] == 0 else Side.RIGHT, key[1])

    def rank(key: tuple[int, int], eid: int) -> int:
        return inst.edges[eid].rank_u if key[0] == 0 else inst.edges[eid].rank_w

    visited: set[tuple[int, int]] = set()
    cycles = []
    for start in sorted(adj):
        if start in visited:
            continue
        first = next(eid for eid in adj[start] if eid in mu.pairs)
        keys = [start]
        walk = [first]
        cur = other_end(start, first)
        while cur != start:
            keys.append(cur)
            nxt = next(eid for eid in adj[cur] if eid != walk[-1])
            walk.append(nxt)
            cur = other_end(cur, nxt)
        visited.update(keys)

        # at vertex l compare outgoing edge walk[l] with incoming walk[l-1]
        outcomes = {
            compare_ranks(rank(keys[l], walk[l]), rank(keys[l], walk[l - 1])) for l in range(len(keys))
        }
        if outcomes == {Pref.STRICTLY_BETTER}:
            cls = CycleClass.C1
        elif outcomes == {Pref.STRICTLY_WORSE}:
            cls = CycleClass.C2
        elif outcomes == {Pref.TIED}:
            cls = CycleClass.C3
        else:
            raise LatticeError(f"cycle through {vid(start)!r} mixes comparison outcomes")
        cycles.append(Cycle(tuple(vid(k) for k in keys + [start]), tuple(walk), cls))
    return CycleDecomposition(tuple(cycles))


# ---------------------------------------------------------------------------
# The lattice of indifference classes


def class_key(inst: Instance, mu: Matching) -> tuple[Optional[int], ...]:
    """Two stable matchings are equivalent iff every LEFT vertex ranks their partners equally."""
    return tuple(_left_rank(inst, mu, v) for v in range(inst.n1))


@dataclass(frozen=True)
class StableLattice:
    matchings: tuple[Matching, ...]  # lexicographic by sorted edge ids
    classes: tuple[tuple[int, ...], ...]  # indices into matchings
    class_reps: tuple[int, ...]
    meet_table: tuple[tuple[int, ...], ...]  # class index of rep_a meet rep_b
    join_table: tuple[tuple[int, ...], ...]
    hasse: tuple[tuple[int, int], ...]  # (lower, upper) cover pairs

    @property
    def size(self) -> int:
        return len(self.classes)


def build_lattice(inst: Instance, budget: EnumerationBudget = EnumerationBudget()) -> StableLattice:
    """Enumerate stable matchings, form classes, and verify the lattice laws exhaustively.

    The order is ``A <= B`` iff ``A meet B == A``; the meet side is the one
    LEFT vertices prefer.
    """
    stable = sorted(enumerate_stable(inst, budget), key=lambda m: m.sorted_ids())
    return lattice_from_stable(inst, stable)


def lattice_from_stable(inst: Instance, stable: list[Matching]) -> StableLattice:
    keys = [class_key(inst, mu) for mu in stable]
    order: dict[tuple, int] = {}
    members: list[list[int]] = []
    for idx, key in enumerate(keys):
        if key not in order:
            order[key] = len(members)
            members.append([])
        members[order[key]].append(idx)
    class_of = [order[k] for k in keys]
    reps = [m[0] for m in members]
    k = len(members)

    def cls(mu: Matching) -> int:
        key = class_key(inst, mu)
        if key not in order or is_non_uniformly_stable(inst, mu) is not None:
            raise LatticeError(f"meet/join result {sorted(mu.pairs)} is not stable")
        return order[key]

    # well-definedness: every choice of representatives lands in the same class
    meet_t = [[-1] * k for _ in range(k)]
    join_t = [[-1] * k for _ in range(k)]
    for a, b in product(range(len(stable)), repeat=2):
        ca, cb = class_of[a], class_of[b]
        for table, op in ((meet_t, meet), (join_t, join)):
            c = cls(op(inst, stable[a], stable[b], check=False))
            if table[ca][cb] == -1:
                table[ca][cb] = c
            elif table[ca][cb] != c:
                raise LatticeError(f"{op.__name__} not well defined on classes {ca}, {cb}")

    _verify_laws(meet_t, join_t)

    leq = [[meet_t[a][b] == a for b in range(k)] for a in range(k)]
    hasse = []
    for a, b in product(range(k), repeat=2):
        if a != b and leq[a][b]:
            if not any(c not in (a, b) and leq[a][c] and leq[c][b] for c in range(k)):
                hasse.append((a, b))

    return StableLattice(
        tuple(stable),
        tuple(tuple(m) for m in members),
        tuple(reps),
        tuple(tuple(r) for r in meet_t),
        tuple(tuple(r) for r in join_t),
        tuple(hasse),
    )


def _verify_laws(meet_t: list[list[int]], join_t: list[list[int]]) -> None:
    k = len(meet_t)
    for plus, minus, name in ((meet_t, join_t, "meet"), (join_t, meet_t, "join")):
        for a in range(k):
            if plus[a][a] != a:
                raise LatticeError(f"{name} not idempotent at class {a}")
            for b in range(k):
                if plus[a][b] != plus[b][a]:
                    raise LatticeError(f"{name} not commutative on ({a}, {b})")
                if plus[a][minus[a][b]] != a:
                    raise LatticeError(f"absorption fails for {name} on ({a}, {b})")
                for c in range(k):
                    if plus[a][plus[b][c]] != plus[plus[a][b]][c]:
                        raise LatticeError(f"{name} not associative on ({a}, {b}, {c})")
                    if plus[a][minus[b][c]] != minus[plus[a][b]][plus[a][c]]:
                        raise LatticeError(f"{name} does not distribute on ({a}, {b}, {c})")


# ---------------------------------------------------------------------------
# Output


def lattice_to_dict(inst: Instance, lat: StableLattice) -> dict:
    return {
        "order": "A <= B iff meet(A, B) = A; meets favour LEFT-side preferences",
        "matchings": [matching_pairs(inst, mu) for mu in lat.matchings],
        "classes": [
            {
                "representative": matching_pairs(inst, lat.matchings[rep]),
                "members": list(members),
            }
            for rep, members in zip(lat.class_reps, lat.classes)
        ],
        "meet": [list(r) for r in lat.meet_table],
        "join": [list(r) for r in lat.join_table],
        "hasse": [list(pair) for pair in lat.hasse],
    }


def lattice_to_dot(inst: Instance, lat: StableLattice) -> str:
    lines = [
        "// Hasse diagram of stable matching classes",
        "// edge A -> B: B covers A, where A <= B iff meet(A, B) = A (LEFT-preferred side at the bottom)",
        "digraph lattice {",
        "  rankdir=BT;",
        "  node [shape=box];",
    ]
    for c, rep in enumerate(lat.class_reps):
        label = " ".join(f"{p['u']}-{p['w']}" for p in matching_pairs(inst, lat.matchings[rep]))
        lines.append(f"  c{c} [label={json.dumps(label or 'empty')}];")
    for a, b in lat.hasse:
        lines.append(f"  c{a} -> c{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
