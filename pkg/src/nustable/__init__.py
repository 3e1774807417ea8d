"""Non-uniformly stable matchings in bipartite graphs with ties."""

from .instance import (
    Edge,
    EdgeKind,
    Instance,
    InstanceError,
    Pref,
    Side,
    VertexId,
    generate_random,
    parse_instance,
    prefers,
    serialize_instance,
)
from .stability import (
    BlockMode,
    BlockReport,
    Matching,
    MatchingError,
    block_set,
    is_non_uniformly_stable,
    strongly_blocks,
    weakly_blocks,
)
from .solver import Result, SolveOutcome, solve

__version__ = "0.1.0"
