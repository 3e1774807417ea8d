"""Instance families used by the acceptance and property tests."""

from __future__ import annotations

import random
from itertools import product
from typing import Iterator

from nustable import Instance, generate_random

K22 = [(0, 0), (0, 1), (1, 0), (1, 1)]


def exhaustive_2x2() -> Iterator[Instance]:
    """Every edge subset of K_{2,2}, every rank in {1, 2} at both ends, every kind assignment."""
    for mask in range(16):
        pairs = [p for k, p in enumerate(K22) if mask >> k & 1]
        for ranks in product((1, 2), repeat=2 * len(pairs)):
            for kinds in product(("super", "strong"), repeat=len(pairs)):
                yield Instance.build(
                    2,
                    2,
                    [(u, w, kinds[k], ranks[2 * k], ranks[2 * k + 1]) for k, (u, w) in enumerate(pairs)],
                )


def random_family(count: int, max_side: int, max_edges: int, seed: int = 2024) -> Iterator[Instance]:
    """``count`` seeded random instances with both sides at most ``max_side``."""
    rng = random.Random(seed)
    made = 0
    while made < count:
        n1 = rng.randint(1, max_side)
        n2 = rng.randint(1, max_side)
        inst = generate_random(
            rng.randrange(2**31),
            n1,
            n2,
            edge_prob=rng.choice((0.3, 0.5, 0.7, 0.9, 1.0)),
            tie_prob=rng.choice((0.0, 0.25, 0.5, 0.75, 1.0)),
            strong_prob=rng.choice((0.0, 0.5, 1.0, rng.random())),
        )
        if inst.m <= max_edges:
            made += 1
            yield inst


def rekind(inst: Instance, kind: str) -> Instance:
    return Instance.build(
        inst.n1, inst.n2, [(e.u, e.w, kind, e.rank_u, e.rank_w) for e in inst.edges]
    )


def strict_family(count: int, side: int, max_edges: int, seed: int = 7) -> Iterator[Instance]:
    """Random instances without ties; these have several stable matchings far more often."""
    rng = random.Random(seed)
    made = 0
    while made < count:
        inst = generate_random(rng.randrange(2**31), side, side, edge_prob=0.9, tie_prob=0, strong_prob=rng.random())
        if inst.m <= max_edges:
            made += 1
            yield inst
