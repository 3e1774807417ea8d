"""Problem data: a bipartite graph with tied preferences and per-edge stability kinds.

Preferences are integer ranks (smaller is better, equal means indifferent), so
every vertex's relation is transitive and complete by construction.  The
absent partner compares as strictly worse than any incident edge.
"""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


class EdgeKind(enum.Enum):
    SUPER = "super"    # must not be weakly blocking
    STRONG = "strong"  # must not be strongly blocking


class Pref(enum.Enum):
    STRICTLY_BETTER = 1
    TIED = 0
    STRICTLY_WORSE = -1


class InstanceError(ValueError):
    """Raised for malformed or inconsistent instance data."""


@dataclass(frozen=True, order=True)
class VertexId:
    side: Side = field(compare=True)
    index: int = field(compare=True)
    name: Optional[str] = field(default=None, compare=False)

    def __repr__(self) -> str:
        tag = "L" if self.side is Side.LEFT else "R"
        return f"{tag}{self.index}" if self.name is None else f"{tag}{self.index}:{self.name}"

    def sort_key(self) -> tuple[int, int]:
        return (0 if self.side is Side.LEFT else 1, self.index)


@dataclass(frozen=True)
class Edge:
    id: int
    u: int  # LEFT index
    w: int  # RIGHT index
    kind: EdgeKind
    rank_u: int
    rank_w: int

    def rank_at(self, side: Side) -> int:
        return self.rank_u if side is Side.LEFT else self.rank_w

    def endpoint(self, side: Side) -> int:
        return self.u if side is Side.LEFT else self.w


@dataclass(frozen=True)
class Instance:
    n1: int
    n2: int
    edges: tuple[Edge, ...]
    left_names: tuple[str, ...] = ()
    right_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.left_names:
            object.__setattr__(self, "left_names", tuple(f"m{i + 1}" for i in range(self.n1)))
        if not self.right_names:
            object.__setattr__(self, "right_names", tuple(f"w{j + 1}" for j in range(self.n2)))
        if len(self.left_names) != self.n1 or len(self.right_names) != self.n2:
            raise InstanceError("name list length does not match vertex count")
        seen: set[tuple[int, int]] = set()
        for pos, e in enumerate(self.edges):
            if e.id != pos:
                raise InstanceError(f"edge ids must be 0..|E|-1 in order; edge at {pos} has id {e.id}")
            if not (0 <= e.u < self.n1 and 0 <= e.w < self.n2):
                raise InstanceError(f"edge {pos} endpoint out of range")
            if e.rank_u < 1 or e.rank_w < 1:
                raise InstanceError(f"edge {pos}: ranks must be >= 1")
            if (e.u, e.w) in seen:
                raise InstanceError(
                    f"duplicate edge ({self.left_names[e.u]}, {self.right_names[e.w]})"
                )
            seen.add((e.u, e.w))

    @classmethod
    def build(
        cls,
        n1: int,
        n2: int,
        edges: Iterable[tuple[int, int, EdgeKind | str, int, int]],
        left_names: Iterable[str] = (),
        right_names: Iterable[str] = (),
    ) -> "Instance":
        """Build from ``(u, w, kind, rank_u, rank_w)`` tuples; ids follow iteration order."""
        built = []
        for i, (u, w, kind, ru, rw) in enumerate(edges):
            built.append(Edge(i, u, w, EdgeKind(kind), ru, rw))
        return cls(n1, n2, tuple(built), tuple(left_names), tuple(right_names))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def incident_left(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.n1)]
        for e in self.edges:
            inc[e.u].append(e.id)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def incident_right(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.n2)]
        for e in self.edges:
            inc[e.w].append(e.id)
        return tuple(tuple(x) for x in inc)

    def incident(self, v: VertexId) -> tuple[int, ...]:
        """E(v) as edge ids in ascending order."""
        table = self.incident_left if v.side is Side.LEFT else self.incident_right
        return table[v.index]

    def vertex(self, side: Side, index: int) -> VertexId:
        names = self.left_names if side is Side.LEFT else self.right_names
        return VertexId(side, index, names[index])

    def vertices(self) -> list[VertexId]:
        return [self.vertex(Side.LEFT, i) for i in range(self.n1)] + [
            self.vertex(Side.RIGHT, j) for j in range(self.n2)
        ]

    def edge_label(self, eid: int) -> str:
        e = self.edges[eid]
        return f"({self.left_names[e.u]},{self.right_names[e.w]})"

    @cached_property
    def pair_index(self) -> dict[tuple[int, int], int]:
        return {(e.u, e.w): e.id for e in self.edges}


def _rank(v: VertexId, edge: Optional[Edge]) -> Optional[int]:
    if edge is None:
        return None
    if edge.endpoint(v.side) != v.index:
        raise InstanceError(f"edge {edge.id} is not incident to {v!r}")
    return edge.rank_at(v.side)


def compare_ranks(a: Optional[int], b: Optional[int]) -> Pref:
    """Compare two ranks at one vertex, ``None`` standing for no partner."""
    if a is None:
        return Pref.TIED if b is None else Pref.STRICTLY_WORSE
    if b is None or a < b:
        return Pref.STRICTLY_BETTER
    return Pref.TIED if a == b else Pref.STRICTLY_WORSE


def prefers(inst: Instance, v: VertexId, a: Optional[Edge], b: Optional[Edge]) -> Pref:
    """How ``v`` ranks ``a`` against ``b``; ``None`` is the empty partner."""
    return compare_ranks(_rank(v, a), _rank(v, b))


# ---------------------------------------------------------------------------
# JSON format


def parse_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InstanceError("malformed instance: top level must be an object")
    for key in ("v1", "v2", "edges"):
        if key not in doc:
            raise InstanceError(f"malformed instance: missing key {key!r}")
    v1, v2, raw_edges = doc["v1"], doc["v2"], doc["edges"]
    if not (isinstance(v1, list) and isinstance(v2, list) and isinstance(raw_edges, list)):
        raise InstanceError("malformed instance: v1, v2 and edges must be arrays")
    left = _name_index(v1, "v1")
    right = _name_index(v2, "v2")

    edges: list[Edge] = []
    seen: dict[tuple[int, int], int] = {}
    for pos, raw in enumerate(raw_edges):
        if not isinstance(raw, dict):
            raise InstanceError(f"edge {pos}: must be an object")
        for key in ("u", "w", "kind", "rank_u", "rank_w"):
            if key not in raw:
                raise InstanceError(f"edge {pos}: missing key {key!r}")
        if raw["u"] not in left:
            raise InstanceError(f"edge {pos}: unknown vertex {raw['u']!r} in v1")
        if raw["w"] not in right:
            raise InstanceError(f"edge {pos}: unknown vertex {raw['w']!r} in v2")
        try:
            kind = EdgeKind(raw["kind"])
        except ValueError:
            raise InstanceError(f"edge {pos}: unknown kind {raw['kind']!r}") from None
        for key in ("rank_u", "rank_w"):
            r = raw[key]
            if isinstance(r, bool) or not isinstance(r, int):
                raise InstanceError(f"edge {pos}: {key} must be an integer")
            if r < 1:
                raise InstanceError(f"edge {pos}: {key} = {r} is below 1")
        u, w = left[raw["u"]], right[raw["w"]]
        if (u, w) in seen:
            raise InstanceError(
                f"duplicate edge ({raw['u']}, {raw['w']}) at positions {seen[(u, w)]} and {pos}"
            )
        seen[(u, w)] = pos
        edges.append(Edge(pos, u, w, kind, raw["rank_u"], raw["rank_w"]))
    return Instance(len(v1), len(v2), tuple(edges), tuple(v1), tuple(v2))


def _name_index(names: list, key: str) -> dict[str, int]:
    index: dict[str, int] = {}
    for i, name in enumerate(names):
        if not isinstance(name, str):
            raise InstanceError(f"{key}[{i}]: vertex names must be strings")
        if name in index:
            raise InstanceError(f"{key}: duplicate vertex name {name!r}")
        index[name] = i
    return index


def instance_to_dict(inst: Instance) -> dict:
    return {
        "v1": list(inst.left_names),
        "v2": list(inst.right_names),
        "edges": [
            {
                "u": inst.left_names[e.u],
                "w": inst.right_names[e.w],
                "kind": e.kind.value,
                "rank_u": e.rank_u,
                "rank_w": e.rank_w,
            }
            for e in inst.edges
        ],
    }


def serialize_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


# ---------------------------------------------------------------------------
# Random instances


def generate_random(
    seed: int,
    n1: int,
    n2: int,
    edge_prob: float | Fraction = Fraction(1, 2),
    tie_prob: float | Fraction = Fraction(1, 3),
    strong_prob: float | Fraction = Fraction(1, 2),
) -> Instance:
    """Seeded random instance.

    Each of the ``n1 * n2`` pairs becomes an edge with probability
    ``edge_prob``.  Every vertex orders its edges uniformly at random and then
    merges each adjacent pair of levels with probability ``tie_prob``.  An edge
    is STRONG with probability ``strong_prob``, SUPER otherwise.
    """
    if n1 < 0 or n2 < 0:
        raise InstanceError("vertex counts must be non-negative")
    rng = random.Random(seed)
    pairs = [(u, w) for u in range(n1) for w in range(n2) if rng.random() < edge_prob]
    kinds = [EdgeKind.STRONG if rng.random() < strong_prob else EdgeKind.SUPER for _ in pairs]

    rank_u = [0] * len(pairs)
    rank_w = [0] * len(pairs)
    by_left: list[list[int]] = [[] for _ in range(n1)]
    by_right: list[list[int]] = [[] for _ in range(n2)]
    for k, (u, w) in enumerate(pairs):
        by_left[u].append(k)
        by_right[w].append(k)
    for groups, ranks in ((by_left, rank_u), (by_right, rank_w)):
        for group in groups:
            order = list(group)
            rng.shuffle(order)
            level = 1
            for pos, k in enumerate(order):
                if pos > 0 and not rng.random() < tie_prob:
                    level += 1
                ranks[k] = level

    return Instance.build(
        n1,
        n2,
        [(u, w, kinds[k], rank_u[k], rank_w[k]) for k, (u, w) in enumerate(pairs)],
    )
