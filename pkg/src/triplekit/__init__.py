"""Exact stability arithmetic for bundle triples and a torus vortex solver.

Two halves. The exact half (invariants, stability, chambers, extensions)
does every slope, threshold, wall and dimension computation in rational
arithmetic with no floating point. The numeric half (vortex) solves the
coupled vortex equations for a line-bundle pair on a discretized flat
torus and reproduces the stability threshold as a solvability threshold.
"""

from .invariants import (
    ConstraintViolationError,
    InvalidRankError,
    InvalidSubtripleError,
    InvariantError,
    ParameterRangeError,
    Rational,
    SubtripleInvariants,
    TripleInvariants,
    dual_invariants,
    dual_subtriple,
    slope,
)
from .stability import (
    SlopeThresholds,
    StabilityStatus,
    StabilityVerdict,
    classify_line_pair,
    classify_phi_zero,
    evaluate_stability,
    kernel_image_identity,
    mu_sigma,
    sigma_from_tau,
    slope_thresholds,
    tau_from_sigma,
    tau_prime,
    theta_tau,
)
from .chambers import (
    ChamberDecomposition,
    ParameterInterval,
    ProjectivityFlags,
    enumerate_walls,
    fibration_bound,
    is_generic,
    moduli_dimension,
    parameter_interval,
    projectivity_flags,
    sigma_interval,
    small_tau_window,
)
from .extensions import (
    ExtensionInvariants,
    SlopeEquivalence,
    check_slope_equivalence,
    dual_parameter,
    extension_invariants,
    subextension_slope,
)
from .vortex import (
    ConstantProfile,
    CosineProfile,
    DiagonalReport,
    PhiProfile,
    ResidualReport,
    ScalarReduction,
    SolveStatus,
    SweepRow,
    SweepWarning,
    TorusGrid,
    VortexProblem,
    VortexSolution,
    ZeroProfile,
    build_problem,
    integral_identity_check,
    moment_map_norm,
    reduce_to_scalar,
    residual,
    solve,
    solve_diagonal,
    summary_json,
    sweep_sigma,
    write_fields_csv,
)

__version__ = "0.1.0"

__all__ = [
    "ConstraintViolationError",
    "InvalidRankError",
    "InvalidSubtripleError",
    "InvariantError",
    "ParameterRangeError",
    "Rational",
    "SubtripleInvariants",
    "TripleInvariants",
    "dual_invariants",
    "dual_subtriple",
    "slope",
    "SlopeThresholds",
    "StabilityStatus",
    "StabilityVerdict",
    "classify_line_pair",
    "classify_phi_zero",
    "evaluate_stability",
    "kernel_image_identity",
    "mu_sigma",
    "sigma_from_tau",
    "slope_thresholds",
    "tau_from_sigma",
    "tau_prime",
    "theta_tau",
    "ChamberDecomposition",
    "ParameterInterval",
    "ProjectivityFlags",
    "enumerate_walls",
    "fibration_bound",
    "is_generic",
    "moduli_dimension",
    "parameter_interval",
    "projectivity_flags",
    "sigma_interval",
    "small_tau_window",
    "ExtensionInvariants",
    "SlopeEquivalence",
    "check_slope_equivalence",
    "dual_parameter",
    "extension_invariants",
    "subextension_slope",
    "ConstantProfile",
    "CosineProfile",
    "DiagonalReport",
    "PhiProfile",
    "ResidualReport",
    "ScalarReduction",
    "SolveStatus",
    "SweepRow",
    "SweepWarning",
    "TorusGrid",
    "VortexProblem",
    "VortexSolution",
    "ZeroProfile",
    "build_problem",
    "integral_identity_check",
    "moment_map_norm",
    "reduce_to_scalar",
    "residual",
    "solve",
    "solve_diagonal",
    "summary_json",
    "sweep_sigma",
    "write_fields_csv",
    "__version__",
]
