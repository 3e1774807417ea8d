"""Polynomial-time decision and construction of a non-uniformly stable matching.

Edge sets are ``frozenset`` of edge ids throughout.  Every place where an
arbitrary choice is allowed is resolved by ascending edge id so that runs and
traces are reproducible.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional

from .instance import EdgeKind, Instance, Side
from .stability import Matching, block_set

EdgeSet = frozenset[int]


class InvariantViolation(AssertionError):
    """A property the algorithm guarantees did not hold; indicates a bug."""


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise InvariantViolation(message)


# ---------------------------------------------------------------------------
# Choice functions


def _best(inst: Instance, side: Side, ids: Iterable[int]) -> list[int]:
    ids = list(ids)
    if not ids:
        return []
    best = min(inst.edges[i].rank_at(side) for i in ids)
    return [i for i in ids if inst.edges[i].rank_at(side) == best]


def choice_left(inst: Instance, v: int, F: Iterable[int]) -> EdgeSet:
    """Most preferred edges of ``F`` at LEFT vertex ``v`` (all of a tie)."""
    F = F if isinstance(F, (set, frozenset)) else frozenset(F)
    return frozenset(_best(inst, Side.LEFT, (i for i in inst.incident_left[v] if i in F)))


def choice_right(inst: Instance, v: int, F: Iterable[int]) -> EdgeSet:
    """Choice at RIGHT vertex ``v``.

    Let B be the best tie class of ``F`` at ``v``.  Returns B when it holds no
    SUPER edge, the single SUPER edge when there is exactly one, and nothing
    when two or more SUPER edges are tied at the top.
    """
    F = F if isinstance(F, (set, frozenset)) else frozenset(F)
    best = _best(inst, Side.RIGHT, (i for i in inst.incident_right[v] if i in F))
    supers = [i for i in best if inst.edges[i].kind is EdgeKind.SUPER]
    if not supers:
        return frozenset(best)
    if len(supers) == 1:
        return frozenset(supers)
    return frozenset()


def choice_first(inst: Instance, F: Iterable[int]) -> EdgeSet:
    F = frozenset(F)
    out: set[int] = set()
    for v in range(inst.n1):
        out |= choice_left(inst, v, F)
    return frozenset(out)


def choice_second(inst: Instance, F: Iterable[int]) -> EdgeSet:
    F = frozenset(F)
    out: set[int] = set()
    for w in range(inst.n2):
        out |= choice_right(inst, w, F)
    return frozenset(out)


def choice_composite(inst: Instance, F: Iterable[int]) -> EdgeSet:
    """LEFT choice followed by RIGHT choice on what survives."""
    return choice_second(inst, choice_first(inst, F))


# ---------------------------------------------------------------------------
# Bipartite matching and deficiency


def left_support(inst: Instance, F: Iterable[int]) -> frozenset[int]:
    """LEFT vertices with at least one edge in ``F``."""
    return frozenset(inst.edges[i].u for i in F)


def max_matching(inst: Instance, F: Iterable[int], over: Side = Side.LEFT) -> Matching:
    """Maximum-cardinality matching inside ``F`` by augmenting paths.

    Roots are vertices of side ``over`` in index order; at each vertex the
    incident edges are tried in ascending id order, which makes the result a
    function of ``F`` alone.
    """
    F = frozenset(F)
    other = Side.RIGHT if over is Side.LEFT else Side.LEFT
    n_root = inst.n1 if over is Side.LEFT else inst.n2
    incident = inst.incident_left if over is Side.LEFT else inst.incident_right
    adj = [[i for i in incident[r] if i in F] for r in range(n_root)]
    mate_other: dict[int, int] = {}  # other-side vertex -> edge id

    def augment(r: int, seen: set[int]) -> bool:
        for eid in adj[r]:
            x = inst.edges[eid].endpoint(other)
            if x in seen:
                continue
            seen.add(x)
            held = mate_other.get(x)
            if held is None or augment(inst.edges[held].endpoint(over), seen):
                mate_other[x] = eid
                return True
        return False

    for r in range(n_root):
        if adj[r]:
            augment(r, set())
    return Matching.from_edges(inst, mate_other.values())


def minimal_deficiency_set(inst: Instance, F: Iterable[int]) -> frozenset[int]:
    """Inclusion-minimal minimizer of ``|Gamma_F(X)| - |X|`` over LEFT sets X.

    After a maximum matching, it is the set of LEFT vertices reachable from
    exposed LEFT vertices by alternating paths (free edge out, matched edge back).
    """
    F = frozenset(F)
    mu = max_matching(inst, F)
    support = left_support(inst, F)
    adj: dict[int, list[int]] = {v: [] for v in support}
    for eid in sorted(F):
        e = inst.edges[eid]
        adj[e.u].append(e.w)
    reached = {v for v in support if v not in mu.partner_left}
    stack = sorted(reached)
    seen_right: set[int] = set()
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w in seen_right:
                continue
            seen_right.add(w)
            held = mu.partner_right.get(w)
            # every reached RIGHT vertex is matched, otherwise an augmenting path exists
            _require(held is not None, "alternating search reached an exposed RIGHT vertex")
            x = inst.edges[held].u
            if x not in reached:
                reached.add(x)
                stack.append(x)
    return frozenset(reached)


def deficiency(inst: Instance, F: Iterable[int], X: Iterable[int]) -> int:
    """``|Gamma_F(X)| - |X|`` for a set ``X`` of LEFT vertices."""
    X = frozenset(X)
    return len({inst.edges[i].w for i in F if inst.edges[i].u in X}) - len(X)


# ---------------------------------------------------------------------------
# Main procedure


@dataclass(frozen=True)
class InnerStep:
    i: int
    P: EdgeSet  # deleted edges after this step
    Q: EdgeSet
    L: EdgeSet
    matching: Optional[Matching]
    N: Optional[frozenset[int]]  # LEFT vertices whose L-edges were deleted
    removed: EdgeSet


@dataclass(frozen=True)
class OuterRound:
    t: int
    steps: tuple[InnerStep, ...]
    e_t: Optional[int]
    R: EdgeSet

    @property
    def i_t(self) -> int:
        return self.steps[-1].i

    @property
    def P_final(self) -> EdgeSet:
        return self.steps[-1].P

    @property
    def matching(self) -> Matching:
        m = self.steps[-1].matching
        assert m is not None
        return m


@dataclass(frozen=True)
class ChoiceTrace:
    rounds: tuple[OuterRound, ...]


class Result(enum.Enum):
    STABLE = "stable"
    NO = "no"


@dataclass(frozen=True)
class SolveOutcome:
    result: Result
    matching: Optional[Matching]
    trace: ChoiceTrace
    deleted: EdgeSet
    final_witness: Optional[int] = None  # edge e_R proving NO


def solve(inst: Instance) -> SolveOutcome:
    E = frozenset(range(inst.m))
    rounds: list[OuterRound] = []
    R: EdgeSet = frozenset()
    t = 0
    while True:
        t += 1
        P_prev = R
        steps: list[InnerStep] = []
        i = 0
        while True:
            i += 1
            rest = E - P_prev
            first = choice_first(inst, rest)
            L = choice_second(inst, first)
            Q = first - L
            mu: Optional[Matching] = None
            N: Optional[frozenset[int]] = None
            if Q:
                removed = Q
            else:
                mu = max_matching(inst, L)
                if len(mu) < len(left_support(inst, rest)):
                    N = minimal_deficiency_set(inst, L)
                    removed = frozenset(eid for eid in L if inst.edges[eid].u in N)
                    _require(bool(removed), "deficiency branch deleted nothing")
                else:
                    removed = frozenset()
            P = P_prev | removed
            steps.append(InnerStep(i, P, Q, L, mu, N, removed))
            if P == P_prev:
                break
            P_prev = P

        # at the fixpoint the Q-branch cannot have fired, so a fresh matching exists
        last = steps[-1]
        _require(not last.Q and last.matching is not None, "fixpoint step lacks a matching")
        mu_t = last.matching
        P_t = last.P
        hits = P_t & block_set(inst, mu_t)
        e_t: Optional[int] = None
        if hits:
            e_t = min(hits)
            w_t = inst.edges[e_t].w
            R_new = P_t | {mu_t.partner_right[w_t]}
        else:
            R_new = P_t
        _require(R <= R_new, "deleted-edge set shrank across rounds")
        rounds.append(OuterRound(t, tuple(steps), e_t, R_new))
        R = R_new
        # The loop condition refers to the round just finished: stop once a
        # round ends without a blocking-based deletion.
        if R_new == P_t:
            break

    final = rounds[-1]
    mu_o = final.matching
    trace = ChoiceTrace(tuple(rounds))
    candidates = sorted(R | choice_composite(inst, E - R))
    for eid in candidates:
        if inst.edges[eid].w not in mu_o.partner_right:
            return SolveOutcome(Result.NO, None, trace, R, eid)
    return SolveOutcome(Result.STABLE, mu_o, trace, R)


# ---------------------------------------------------------------------------
# Trace serialization


def _ids(s: Iterable[int]) -> list[int]:
    return sorted(s)


def trace_to_dict(inst: Instance, trace: ChoiceTrace) -> dict:
    rounds = []
    for rnd in trace.rounds:
        steps = []
        for st in rnd.steps:
            steps.append(
                {
                    "i": st.i,
                    "P": _ids(st.P),
                    "Q": _ids(st.Q),
                    "L": _ids(st.L),
                    "matching": None if st.matching is None else list(st.matching.sorted_ids()),
                    "N": None if st.N is None else [inst.left_names[v] for v in sorted(st.N)],
                }
            )
        rounds.append(
            {"t": rnd.t, "steps": steps, "i_t": rnd.i_t, "e_t": rnd.e_t, "R": _ids(rnd.R)}
        )
    return {"rounds": rounds}
