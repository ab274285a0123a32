"""Concurrence of stochastic 1-qubit maps and rank-2 states of 2 x n systems.

The package solves the convex-roof extension of the pure-state
concurrence for arbitrary positive trace-preserving 1-qubit maps: it
finds the unique parameter at which the channel's indefinite quadratic
form becomes positive semidefinite with a space- or light-like kernel,
classifies the roof as flat or conical, evaluates the concurrence, and
builds explicit two-component optimal decompositions.  The same machinery
yields the concurrence and an entanglement-of-formation value or bound
for rank-2 density operators of 2 x n systems.
"""

__version__ = "0.1.0"

from .bipartite import (
    BipartiteState,
    InducedMap,
    concurrence_2xn,
    eof_bound,
    eof_from_concurrence,
    induced_map,
    partial_trace_b,
    wootters_concurrence,
)
from .channels import (
    AffineMap,
    CanonicalParams,
    amplitude_damping,
    axial,
    choi_matrix,
    depolarizing,
    from_canonical,
    identity_map,
    is_completely_positive,
    is_positive,
    max_output_norm,
    phase_damping,
    unital,
)
from .estimator import ChannelConcurrence
from .exceptions import (
    InvalidStateError,
    NoPsdWindowError,
    NotPositiveMapError,
    QConcurrenceError,
    RankTooHighError,
)
from .minkowski import (
    MINKOWSKI_METRIC,
    CausalClass,
    FourVector,
    causal_class,
    det_from_vector,
    from_four_vector,
    minkowski_dot,
    to_four_vector,
)
from .oracle import (
    OracleConfig,
    SufficiencyReport,
    brute_force_concurrence,
    minimize_pure_average,
    two_point_sufficiency,
)
from .roof import (
    Decomposition,
    QuadraticForm,
    RoofSolution,
    axial_w0_closed_form,
    build_q,
    cholesky_boundary_check,
    concurrence,
    optimal_decomposition,
    solve_w0,
    unital_concurrence_closed_form,
)

__all__ = [
    "__version__",
    "AffineMap",
    "BipartiteState",
    "CanonicalParams",
    "CausalClass",
    "ChannelConcurrence",
    "Decomposition",
    "FourVector",
    "InducedMap",
    "InvalidStateError",
    "MINKOWSKI_METRIC",
    "NoPsdWindowError",
    "NotPositiveMapError",
    "OracleConfig",
    "QConcurrenceError",
    "QuadraticForm",
    "RankTooHighError",
    "RoofSolution",
    "SufficiencyReport",
    "amplitude_damping",
    "axial",
    "axial_w0_closed_form",
    "brute_force_concurrence",
    "build_q",
    "causal_class",
    "choi_matrix",
    "cholesky_boundary_check",
    "concurrence",
    "concurrence_2xn",
    "depolarizing",
    "det_from_vector",
    "eof_bound",
    "eof_from_concurrence",
    "from_canonical",
    "from_four_vector",
    "identity_map",
    "induced_map",
    "is_completely_positive",
    "is_positive",
    "max_output_norm",
    "minimize_pure_average",
    "minkowski_dot",
    "optimal_decomposition",
    "partial_trace_b",
    "phase_damping",
    "solve_w0",
    "to_four_vector",
    "two_point_sufficiency",
    "unital",
    "unital_concurrence_closed_form",
    "wootters_concurrence",
]
