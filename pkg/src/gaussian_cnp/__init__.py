"""Classical-nonclassical polarity of few-mode Gaussian states."""

from .core import (
    CovarianceState,
    ModeStats,
    ValidationReport,
    convert_basis,
    make_state,
    mode_stats,
    reduced_state,
    tensor,
    validate,
)
from .invariants import (
    InvariantSet,
    g_eval,
    invariants_from_nu,
    minor_invariants,
    partial_transpose,
    symplectic_eigenvalues,
)
from .polarity import (
    PolarityReport,
    bipartite_cnp,
    classify,
    log_negativity,
    single_mode_cnp,
    total_cnp,
)
from .symplectic import (
    GaussianOp,
    NetworkSpec,
    apply,
    beamsplitter,
    check_symplectic,
    op_matrix,
    phase_shift,
    random_passive_network,
    raw,
    squeeze,
    squeezing_spectrum,
    two_mode_squeeze,
)
from .audit import AuditConfig, AuditReport, random_state, run_audit

__version__ = "0.1.0"

__all__ = [
    "CovarianceState",
    "ModeStats",
    "ValidationReport",
    "convert_basis",
    "make_state",
    "mode_stats",
    "reduced_state",
    "tensor",
    "validate",
    "InvariantSet",
    "g_eval",
    "invariants_from_nu",
    "minor_invariants",
    "partial_transpose",
    "symplectic_eigenvalues",
    "PolarityReport",
    "bipartite_cnp",
    "classify",
    "log_negativity",
    "single_mode_cnp",
    "total_cnp",
    "GaussianOp",
    "NetworkSpec",
    "apply",
    "beamsplitter",
    "check_symplectic",
    "op_matrix",
    "phase_shift",
    "random_passive_network",
    "raw",
    "squeeze",
    "squeezing_spectrum",
    "two_mode_squeeze",
    "AuditConfig",
    "AuditReport",
    "random_state",
    "run_audit",
]
