"""Correlation clustering engine: randomized pivot clustering with local
eject/absorb moves, a charge-based per-run auditor, exact small-instance
optima, and fully dynamic maintenance under edge flips."""

from .audit import (
    ChargeVector,
    MistakeReport,
    WidthEstimate,
    classify_mistakes,
    compute_charges,
    estimate_pair_width,
    verify_charge_dominance,
)
from .dynamic import DynamicState, UpdateStats, build
from .errors import ClassificationViolationError, SizeLimitError, TraceMismatchError
from .graph import (
    Clustering,
    Graph,
    clustering_cost,
    count_common_and_symdiff,
    enumerate_bad_triangles,
    is_bad_triangle,
    read_edge_list,
    read_update_stream,
    write_edge_list,
    write_update_stream,
)
from .generators import (
    gen_complete_bipartite,
    gen_complete_minus_edge,
    gen_er,
    gen_flip_stream,
    gen_two_cliques,
)
from .oracle import OptResult, brute_force_opt, triangle_packing_lower_bound
from .pivot import (
    ExecutionTrace,
    IterationRecord,
    clustering_from_trace,
    run_modified_pivot,
    run_pivot,
)
from .tape import (
    DEFAULT_DELTA,
    DEFAULT_EPSILON,
    DEFAULT_K,
    WIDTH_BOUND,
    Params,
    RandomTape,
    derive_seed,
    make_tape,
)

__version__ = "0.1.0"

__all__ = [
    "ChargeVector",
    "ClassificationViolationError",
    "Clustering",
    "DEFAULT_DELTA",
    "DEFAULT_EPSILON",
    "DEFAULT_K",
    "DynamicState",
    "ExecutionTrace",
    "Graph",
    "IterationRecord",
    "MistakeReport",
    "OptResult",
    "Params",
    "RandomTape",
    "SizeLimitError",
    "TraceMismatchError",
    "UpdateStats",
    "WIDTH_BOUND",
    "WidthEstimate",
    "brute_force_opt",
    "build",
    "classify_mistakes",
    "clustering_cost",
    "clustering_from_trace",
    "compute_charges",
    "count_common_and_symdiff",
    "derive_seed",
    "enumerate_bad_triangles",
    "estimate_pair_width",
    "gen_complete_bipartite",
    "gen_complete_minus_edge",
    "gen_er",
    "gen_flip_stream",
    "gen_two_cliques",
    "is_bad_triangle",
    "make_tape",
    "read_edge_list",
    "read_update_stream",
    "run_modified_pivot",
    "run_pivot",
    "triangle_packing_lower_bound",
    "verify_charge_dominance",
    "write_edge_list",
    "write_update_stream",
]
