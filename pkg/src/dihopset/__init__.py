"""Approximate hopsets for weighted directed graphs, with exact oracles."""

from .builder import (
    BuildConfig,
    Hopset,
    build_folklore,
    build_hopset,
    build_hopset_large_beta,
    build_hopset_small_beta,
    build_shortcut_set,
)
from .edges import EdgeSet, HopsetEdge
from .generate import generate
from .graph import (
    GraphFormatError,
    NoPathError,
    Path,
    WeightedDigraph,
    apsp,
    hop_bounded_dist,
    parse_graph,
    road,
    sssp_exact,
    transitive_closure_weighted,
)
from .verify import (
    VerificationReport,
    check_backward_bound,
    check_distance_preservation,
    check_hop_stretch,
    extract_witness_path,
)

__version__ = "0.1.0"
