"""Sparse-signal recovery by iterative hard thresholding.

A toolkit around the frame-reconstruction update ``x + gamma * Phi^T
(y - Phi x)`` with hard thresholding: the plain solver plus polynomial
acceleration, least-squares refinement, and adaptive step-length
variants, restricted-isometry analysis tools, and a Monte-Carlo
benchmark harness with a CLI.
"""

from .signals import (
    DenseVector,
    SparseVector,
    Matrix,
    hard_threshold,
    threshold_dense,
    lp_norm,
    l0_norm,
    support_match,
)
from .sensing import (
    GAUSSIAN,
    UNIT_SPHERE_COLUMNS,
    EnsembleSpec,
    SignalSpec,
    generate_matrix,
    generate_sparse_signal,
    measure,
    suggest_measurements,
    mix_seed,
)
from .rip import (
    BudgetExceededError,
    RipEstimate,
    RegimeReport,
    rip_constant_exact,
    rip_constant_sampled,
    check_conditions,
    l0_oracle,
)
from .reconstruct import (
    ADAPTIVE,
    ALGORITHMS,
    RankDeficientError,
    SolverConfig,
    SolveResult,
    IterationState,
    FrameBounds,
    chebyshev_omega,
    richardson_omega,
    spectral_extremes,
    least_squares_on_support,
    mfr,
    mfr_accelerated,
    mfr_least_squares,
    mfr_least_squares_accelerated,
    mfr_adaptive,
    frame_reconstruct,
    solve,
)
from .bench import (
    ExperimentSpec,
    TrialRecord,
    CellSummary,
    run_experiment,
    summarize,
    emit_csv,
    read_records,
    emit_summary_csv,
    emit_pivot_csv,
    trial_success,
)

__version__ = "0.1.0"

__all__ = [
    "DenseVector", "SparseVector", "Matrix",
    "hard_threshold", "threshold_dense", "lp_norm", "l0_norm", "support_match",
    "GAUSSIAN", "UNIT_SPHERE_COLUMNS", "EnsembleSpec", "SignalSpec",
    "generate_matrix", "generate_sparse_signal", "measure",
    "suggest_measurements", "mix_seed",
    "BudgetExceededError", "RipEstimate", "RegimeReport",
    "rip_constant_exact", "rip_constant_sampled", "check_conditions", "l0_oracle",
    "ADAPTIVE", "ALGORITHMS", "RankDeficientError",
    "SolverConfig", "SolveResult", "IterationState", "FrameBounds",
    "chebyshev_omega", "richardson_omega", "spectral_extremes",
    "least_squares_on_support",
    "mfr", "mfr_accelerated", "mfr_least_squares",
    "mfr_least_squares_accelerated", "mfr_adaptive", "frame_reconstruct", "solve",
    "ExperimentSpec", "TrialRecord", "CellSummary",
    "run_experiment", "summarize", "emit_csv", "read_records",
    "emit_summary_csv", "emit_pivot_csv", "trial_success",
    "__version__",
]
