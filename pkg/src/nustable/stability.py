"""Matchings, blocking predicates and the non-uniform stability check."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .instance import (
    Edge,
    EdgeKind,
    Instance,
    Pref,
    Side,
    VertexId,
    compare_ranks,
)


class MatchingError(ValueError):
    """Raised when an edge set is not a matching or references unknown edges."""


@dataclass(frozen=True)
class Matching:
    pairs: frozenset[int]
    partner_left: dict[int, int] = field(compare=False, hash=False, repr=False)
    partner_right: dict[int, int] = field(compare=False, hash=False, repr=False)

    @classmethod
    def from_edges(cls, inst: Instance, edge_ids: Iterable[int]) -> "Matching":
        pairs = frozenset(edge_ids)
        left: dict[int, int] = {}
        right: dict[int, int] = {}
        for eid in sorted(pairs):
            if not 0 <= eid < inst.m:
                raise MatchingError(f"unknown edge id {eid}")
            e = inst.edges[eid]
            if e.u in left:
                raise MatchingError(f"vertex {inst.left_names[e.u]} covered twice")
            if e.w in right:
                raise MatchingError(f"vertex {inst.right_names[e.w]} covered twice")
            left[e.u] = eid
            right[e.w] = eid
        return cls(pairs, left, right)

    @classmethod
    def empty(cls) -> "Matching":
        return cls(frozenset(), {}, {})

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, eid: object) -> bool:
        return eid in self.pairs

    def sorted_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.pairs))

    def partner(self, v: VertexId) -> Optional[int]:
        table = self.partner_left if v.side is Side.LEFT else self.partner_right
        return table.get(v.index)

    def partner_edge(self, inst: Instance, side: Side, index: int) -> Optional[Edge]:
        table = self.partner_left if side is Side.LEFT else self.partner_right
        eid = table.get(index)
        return None if eid is None else inst.edges[eid]


class BlockMode(enum.Enum):
    WEAK = "weak"
    STRONG = "strong"


@dataclass(frozen=True)
class BlockReport:
    edge: int
    mode: BlockMode
    witnesses: tuple[tuple[str, Pref], ...]  # (vertex name, e vs current partner)

    def to_dict(self, inst: Instance) -> dict:
        e = inst.edges[self.edge]
        return {
            "edge": self.edge,
            "u": inst.left_names[e.u],
            "w": inst.right_names[e.w],
            "mode": self.mode.value,
            "witnesses": [{"vertex": name, "comparison": p.name.lower()} for name, p in self.witnesses],
        }


def _comparisons(inst: Instance, mu: Matching, e: Edge) -> tuple[Pref, Pref]:
    if e.id in mu.pairs:
        raise MatchingError(f"edge {e.id} belongs to the matching")
    pu = mu.partner_edge(inst, Side.LEFT, e.u)
    pw = mu.partner_edge(inst, Side.RIGHT, e.w)
    return (
        compare_ranks(e.rank_u, None if pu is None else pu.rank_u),
        compare_ranks(e.rank_w, None if pw is None else pw.rank_w),
    )


def weakly_blocks(inst: Instance, mu: Matching, e: Edge) -> bool:
    cu, cw = _comparisons(inst, mu, e)
    return cu is not Pref.STRICTLY_WORSE and cw is not Pref.STRICTLY_WORSE


def strongly_blocks(inst: Instance, mu: Matching, e: Edge) -> bool:
    cu, cw = _comparisons(inst, mu, e)
    if Pref.STRICTLY_WORSE in (cu, cw):
        return False
    return Pref.STRICTLY_BETTER in (cu, cw)


def blocks(inst: Instance, mu: Matching, e: Edge) -> bool:
    """Blocking in the kind-dependent sense: weak for SUPER edges, strong for STRONG."""
    if e.kind is EdgeKind.SUPER:
        return weakly_blocks(inst, mu, e)
    return strongly_blocks(inst, mu, e)


def _report(inst: Instance, mu: Matching, e: Edge) -> BlockReport:
    cu, cw = _comparisons(inst, mu, e)
    mode = BlockMode.WEAK if e.kind is EdgeKind.SUPER else BlockMode.STRONG
    return BlockReport(e.id, mode, ((inst.left_names[e.u], cu), (inst.right_names[e.w], cw)))


def check_matching(inst: Instance, mu: Matching) -> None:
    """Raise ``MatchingError`` unless ``mu`` is a consistent matching of ``inst``."""
    rebuilt = Matching.from_edges(inst, mu.pairs)
    if rebuilt.partner_left != mu.partner_left or rebuilt.partner_right != mu.partner_right:
        raise MatchingError("partner maps inconsistent with pairs")


def blocking_edges(inst: Instance, mu: Matching) -> list[BlockReport]:
    """Every blocking edge, in edge-id order."""
    check_matching(inst, mu)
    return [_report(inst, mu, e) for e in inst.edges if e.id not in mu.pairs and blocks(inst, mu, e)]


def is_non_uniformly_stable(inst: Instance, mu: Matching) -> Optional[BlockReport]:
    """``None`` when ``mu`` is stable, else the lowest-id blocking edge."""
    check_matching(inst, mu)
    for e in inst.edges:
        if e.id not in mu.pairs and blocks(inst, mu, e):
            return _report(inst, mu, e)
    return None


def block_set(inst: Instance, mu: Matching) -> frozenset[int]:
    """Blocking edges whose RIGHT endpoint is matched in ``mu``."""
    check_matching(inst, mu)
    return frozenset(
        e.id
        for e in inst.edges
        if e.id not in mu.pairs and e.w in mu.partner_right and blocks(inst, mu, e)
    )


# ---------------------------------------------------------------------------
# JSON format


def matching_pairs(inst: Instance, mu: Matching) -> list[dict[str, str]]:
    return [
        {"u": inst.left_names[inst.edges[eid].u], "w": inst.right_names[inst.edges[eid].w]}
        for eid in mu.sorted_ids()
    ]


def serialize_matching(inst: Instance, mu: Matching) -> str:
    return json.dumps({"pairs": matching_pairs(inst, mu)}, indent=2) + "\n"


def parse_matching(inst: Instance, text: str) -> Matching:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatchingError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("pairs"), list):
        raise MatchingError("malformed matching: expected {\"pairs\": [...]}")
    left = {name: i for i, name in enumerate(inst.left_names)}
    right = {name: j for j, name in enumerate(inst.right_names)}
    ids = []
    for pos, pair in enumerate(doc["pairs"]):
        if not isinstance(pair, dict) or "u" not in pair or "w" not in pair:
            raise MatchingError(f"pair {pos}: expected an object with keys 'u' and 'w'")
        u, w = pair["u"], pair["w"]
        if u not in left or w not in right:
            raise MatchingError(f"pair {pos}: unknown vertex in ({u}, {w})")
        eid = inst.pair_index.get((left[u], right[w]))
        if eid is None:
            raise MatchingError(f"pair {pos}: ({u}, {w}) is not an edge of the instance")
        if eid in ids:
            raise MatchingError(f"pair {pos}: ({u}, {w}) listed twice")
        ids.append(eid)
    return Matching.from_edges(inst, ids)

