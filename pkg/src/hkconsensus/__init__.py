"""Consensus values for multi-agent networks via heat kernel pagerank.

Exact dense oracles for desk-scale validation, a sublinear seeded Monte
Carlo estimator for heat kernel pagerank, weighted-average consensus, and a
leader-following solver for restricted Laplacian systems.
"""

__version__ = "0.1.0"

from .consensus import (
    ConsensusResult,
    ConvergenceTrace,
    consensus_state,
    convergence_trace,
    disagreement,
    weighted_average,
)
from .errors import ConvergenceError, HkError, InputFormatError, PreconditionError
from .exact import (
    SpectralGap,
    exact_hkpr,
    heat_kernel_apply,
    lambda1,
    lambda_min_restricted,
    poisson_cutoff,
    restricted_laplacian,
    restricted_laplacian_solve_dense,
)
from .graph import (
    Graph,
    complement_node_set,
    dump_edge_list,
    induced_index_maps,
    is_connected,
    is_connected_subset,
    load_edge_list,
    validate_node_set,
    write_edge_list,
)
from .hkpr import (
    HkprEstimate,
    Preference,
    WalkParams,
    approx_hkpr,
    approx_hkpr_restricted,
    random_walk,
    sample_walk_length,
    walk_params,
)
from .leader import (
    LeaderControl,
    LfSolution,
    Partition,
    SolverParams,
    build_b,
    follower_protocol,
    lf_consensus_state,
    lf_solve,
    parse_controls,
    parse_partition,
)

__all__ = [
    "ConsensusResult",
    "ConvergenceTrace",
    "ConvergenceError",
    "Graph",
    "HkError",
    "HkprEstimate",
    "InputFormatError",
    "LeaderControl",
    "LfSolution",
    "Partition",
    "PreconditionError",
    "Preference",
    "SolverParams",
    "SpectralGap",
    "WalkParams",
    "approx_hkpr",
    "approx_hkpr_restricted",
    "build_b",
    "complement_node_set",
    "consensus_state",
    "convergence_trace",
    "disagreement",
    "dump_edge_list",
    "exact_hkpr",
    "follower_protocol",
    "heat_kernel_apply",
    "induced_index_maps",
    "is_connected",
    "is_connected_subset",
    "lambda1",
    "lambda_min_restricted",
    "lf_consensus_state",
    "lf_solve",
    "load_edge_list",
    "parse_controls",
    "parse_partition",
    "poisson_cutoff",
    "random_walk",
    "restricted_laplacian",
    "restricted_laplacian_solve_dense",
    "sample_walk_length",
    "validate_node_set",
    "walk_params",
    "weighted_average",
    "write_edge_list",
]
