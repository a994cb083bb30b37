"""Bound states of 1D attractive wells.

A Green's-kernel fixed-point solver that maps binding energy to coupling
strength (and back, by curve inversion), a grid Lanczos eigensolver with a
residual-variance gauge that separates genuine bound pairs from the
spurious ones the discretized continuum produces, and independent oracles
(outward shooting, closed-form levels) to arbitrate between them.
"""

from .errors import (
    ConfigError,
    GridMismatchError,
    NoBoundStateError,
    SolverError,
)
from .grid import Grid, SampledFunction, inner_product, integrate, make_grid
from .lanczos import (
    Hamiltonian,
    LanczosRun,
    RitzPair,
    classify_pairs,
    delta_check,
    hamiltonian_apply,
    lanczos_run,
    ritz_history,
    ritz_pairs,
    start_vector,
    tridiagonal_eigen,
    write_trace_csv,
)
from .potentials import (
    PotentialSpec,
    peak_value,
    potential_function,
    potential_pieces,
    sample_potential,
)
from .shooting import (
    ShootingConfig,
    analytic_level,
    shoot_mismatch,
    shooting_eigenvalue,
)
from .waxman import (
    GreensKernel,
    LambdaEpsilonCurve,
    SweepPoint,
    WaxmanConfig,
    WaxmanResult,
    apply_kernel,
    bound_state_residual,
    curve_from_results,
    default_x_ref,
    invert_curve,
    kernel_value,
    lambda_from,
    sweep_epsilon,
    sweep_results,
    threshold_lambda,
    waxman_fixed_point,
    waxman_step,
    write_sweep_csv,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "GridMismatchError",
    "NoBoundStateError",
    "SolverError",
    "Grid",
    "SampledFunction",
    "make_grid",
    "integrate",
    "inner_product",
    "PotentialSpec",
    "sample_potential",
    "potential_function",
    "potential_pieces",
    "peak_value",
    "GreensKernel",
    "WaxmanConfig",
    "WaxmanResult",
    "LambdaEpsilonCurve",
    "SweepPoint",
    "kernel_value",
    "apply_kernel",
    "lambda_from",
    "waxman_step",
    "waxman_fixed_point",
    "default_x_ref",
    "sweep_results",
    "sweep_epsilon",
    "curve_from_results",
    "invert_curve",
    "threshold_lambda",
    "bound_state_residual",
    "write_sweep_csv",
    "Hamiltonian",
    "LanczosRun",
    "RitzPair",
    "hamiltonian_apply",
    "start_vector",
    "lanczos_run",
    "tridiagonal_eigen",
    "ritz_pairs",
    "ritz_history",
    "delta_check",
    "classify_pairs",
    "write_trace_csv",
    "ShootingConfig",
    "shoot_mismatch",
    "shooting_eigenvalue",
    "analytic_level",
]
