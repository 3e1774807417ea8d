"""Exhaustive ground truth for small instances."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from .instance import Instance
from .stability import Matching, is_non_uniformly_stable


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class EnumerationBudget:
    max_edges: int = 20
    max_matchings: int = 10**7


def enumerate_matchings(inst: Instance, budget: EnumerationBudget = EnumerationBudget()) -> Iterator[Matching]:
    """Every matching exactly once, in lexicographic order of sorted edge ids."""
    if inst.m > budget.max_edges:
        raise BudgetExceeded(f"{inst.m} edges exceeds the enumeration limit of {budget.max_edges}")
    edges = inst.edges
    used_left: set[int] = set()
    used_right: set[int] = set()
    chosen: list[int] = []
    count = 0

    def rec(start: int) -> Iterator[Matching]:
        nonlocal count
        count += 1
        if count > budget.max_matchings:
            raise BudgetExceeded(f"more than {budget.max_matchings} matchings")
        yield Matching.from_edges(inst, chosen)
        for j in range(start, len(edges)):
            e = edges[j]
            if e.u in used_left or e.w in used_right:
                continue
            used_left.add(e.u)
            used_right.add(e.w)
            chosen.append(j)
            yield from rec(j + 1)
            chosen.pop()
            used_left.discard(e.u)
            used_right.discard(e.w)

    yield from rec(0)


def enumerate_stable(inst: Instance, budget: EnumerationBudget = EnumerationBudget()) -> list[Matching]:
    return [mu for mu in enumerate_matchings(inst, budget) if is_non_uniformly_stable(inst, mu) is None]


# ---------------------------------------------------------------------------
# Classical notions coded from scratch on vertex pairs, ignoring edge kinds.


def _partner_ranks(inst: Instance, pairs: Iterable[int]) -> tuple[dict[int, int], dict[int, int]]:
    at_left: dict[int, int] = {}
    at_right: dict[int, int] = {}
    for eid in pairs:
        e = inst.edges[eid]
        at_left[e.u] = e.rank_u
        at_right[e.w] = e.rank_w
    return at_left, at_right


def is_super_stable(inst: Instance, pairs: Iterable[int]) -> bool:
    """No unmatched pair in which each side likes the other at least as much as its partner."""
    pairs = set(pairs)
    at_left, at_right = _partner_ranks(inst, pairs)
    for e in inst.edges:
        if e.id in pairs:
            continue
        ok_u = e.u not in at_left or e.rank_u <= at_left[e.u]
        ok_w = e.w not in at_right or e.rank_w <= at_right[e.w]
        if ok_u and ok_w:
            return False
    return True


def is_strongly_stable(inst: Instance, pairs: Iterable[int]) -> bool:
    """No unmatched pair where one side strictly gains and the other does not lose."""
    pairs = set(pairs)
    at_left, at_right = _partner_ranks(inst, pairs)
    inf = float("inf")
    for e in inst.edges:
        if e.id in pairs:
            continue
        cur_u = at_left.get(e.u, inf)
        cur_w = at_right.get(e.w, inf)
        if (e.rank_u < cur_u and e.rank_w <= cur_w) or (e.rank_u <= cur_u and e.rank_w < cur_w):
            return False
    return True


def _all_matchings_plain(inst: Instance) -> Iterator[tuple[int, ...]]:
    # independent of enumerate_matchings: filter all subsets by size
    for k in range(min(inst.n1, inst.n2) + 1):
        for combo in combinations(range(inst.m), k):
            us = {inst.edges[i].u for i in combo}
            ws = {inst.edges[i].w for i in combo}
            if len(us) == k and len(ws) == k:
                yield combo


def super_stable_matchings(inst: Instance) -> list[tuple[int, ...]]:
    return sorted(c for c in _all_matchings_plain(inst) if is_super_stable(inst, c))


def strongly_stable_matchings(inst: Instance) -> list[tuple[int, ...]]:
    return sorted(c for c in _all_matchings_plain(inst) if is_strongly_stable(inst, c))


# ---------------------------------------------------------------------------
# Deficiency function


def brute_minimal_minimizer(inst: Instance, F: Iterable[int], limit: int = 12) -> frozenset[int]:
    F = frozenset(F)
    support = sorted({inst.edges[i].u for i in F})
    if len(support) > limit:
        raise BudgetExceeded(f"{len(support)} LEFT vertices exceeds the subset limit of {limit}")
    nbrs = {v: frozenset(inst.edges[i].w for i in F if inst.edges[i].u == v) for v in support}

    best = None
    minimizers: list[frozenset[int]] = []
    for k in range(len(support) + 1):
        for X in combinations(support, k):
            gamma: set[int] = set()
            for v in X:
                gamma |= nbrs[v]
            val = len(gamma) - k
            if best is None or val < best:
                best, minimizers = val, [frozenset(X)]
            elif val == best:
                minimizers.append(frozenset(X))

    smallest = min(minimizers, key=len)
    if any(len(X) == len(smallest) and X != smallest for X in minimizers) or not all(
        smallest <= X for X in minimizers
    ):
        raise AssertionError("minimal minimizer is not unique")
    return smallest
