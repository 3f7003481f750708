"""Compressed sensing of non-negative sparse signals over sparse
measurement matrices built from minimally expanding bipartite graphs.

The toolkit covers the full pipeline: random left-regular graph generation
and weight perturbation, exact recoverability certification through the
null space (per-support and all-supports), complete-rank computation, fast
reverse-expansion recovery alongside the l1 baseline, noise-robust
recovery, recovery-threshold evaluation, and reproducible Monte-Carlo
sweeps.

Hot kernels (simplex pivoting and subset scans) run on a compiled extension
when available; ``kernel_backend()`` reports which implementation is
active, and MINEXP_PURE_PYTHON=1 forces the Python fallback.
"""

from ._kernels import backend_name as kernel_backend
from .certify import (
    CompleteRankResult,
    SupportCertificate,
    complete_rank,
    find_unrecoverable_support,
    rip1_check,
    rip1_reference_bounds,
    sample_null_vectors,
    strong_recoverable_k,
    support_recoverable,
    two_hop_condition,
    zero_sum_holds,
)
from .errors import (
    ChecksumMismatchError,
    DegenerateSplitError,
    FormatError,
    InsufficientZerosError,
    InvalidDegreeError,
    InvalidEpsilonError,
    MinexpError,
    NoFeasibleAlphaError,
    NoFeasibleMuError,
    NotConstantColumnSumError,
    NumericalFailureError,
    OutOfDomainError,
    RankDeficientError,
    TooLargeError,
)
from .graphs import (
    BipartiteGraph,
    MeasurementMatrix,
    deficiency_profile,
    expansion_violation,
    is_expander,
    min_expansion_deficiency,
    minimal_expansion_order,
    neighbors,
    perturb,
    random_left_regular,
)
from .linalg import column_rank, least_squares, nullspace_basis
from .lp import LinearProgram, LpSolution, nonneg_lp, solve_lp
from .matrixio import read_matrix, write_matrix
from .recovery import (
    NoiseModel,
    RecoveryReport,
    SparseSignal,
    l1_min_nonneg,
    noisy_recovery,
    random_sparse_signal,
    reverse_expansion_recovery,
)
from .sweeps import (
    SweepConfig,
    SweepRow,
    build_matrix,
    parse_config,
    run_noise_sweep,
    run_recovery_sweep,
    write_sweep_csv,
)
from .thresholds import (
    ThresholdParams,
    binary_entropy,
    existence_prob_bound,
    strong_max_mu,
    strong_min_degree,
    weak_F,
    weak_max_alpha,
)

__version__ = "0.1.0"

__all__ = [
    "BipartiteGraph",
    "ChecksumMismatchError",
    "CompleteRankResult",
    "DegenerateSplitError",
    "FormatError",
    "InsufficientZerosError",
    "InvalidDegreeError",
    "InvalidEpsilonError",
    "LinearProgram",
    "LpSolution",
    "MeasurementMatrix",
    "MinexpError",
    "NoFeasibleAlphaError",
    "NoFeasibleMuError",
    "NoiseModel",
    "NotConstantColumnSumError",
    "NumericalFailureError",
    "OutOfDomainError",
    "RankDeficientError",
    "RecoveryReport",
    "SparseSignal",
    "SupportCertificate",
    "SweepConfig",
    "SweepRow",
    "ThresholdParams",
    "TooLargeError",
    "binary_entropy",
    "build_matrix",
    "column_rank",
    "complete_rank",
    "deficiency_profile",
    "existence_prob_bound",
    "expansion_violation",
    "find_unrecoverable_support",
    "is_expander",
    "kernel_backend",
    "l1_min_nonneg",
    "least_squares",
    "min_expansion_deficiency",
    "minimal_expansion_order",
    "neighbors",
    "noisy_recovery",
    "nonneg_lp",
    "nullspace_basis",
    "parse_config",
    "perturb",
    "random_left_regular",
    "random_sparse_signal",
    "read_matrix",
    "reverse_expansion_recovery",
    "rip1_check",
    "rip1_reference_bounds",
    "run_noise_sweep",
    "run_recovery_sweep",
    "sample_null_vectors",
    "solve_lp",
    "strong_max_mu",
    "strong_min_degree",
    "strong_recoverable_k",
    "support_recoverable",
    "two_hop_condition",
    "weak_F",
    "weak_max_alpha",
    "write_matrix",
    "write_sweep_csv",
    "zero_sum_holds",
]
