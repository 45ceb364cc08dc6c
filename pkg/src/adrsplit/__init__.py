"""Splitting-based time integrators for 1-D semilinear advection-diffusion-reaction
equations with inhomogeneous Dirichlet boundary conditions.

The package provides a boundary-corrected first-order scheme and a
second-order predictor-corrector scheme that avoid the order reduction
classical Lie and Strang splittings suffer at Dirichlet boundaries, plus the
classical baselines, an RK4 method-of-lines reference, and a convergence-study
harness with CSV/dat reports and matplotlib figures.
"""

from .errors import (
    NonFiniteStateError,
    SingularSystemError,
    StabilityViolationError,
    UndefinedOrderError,
)
from .grid import (
    Grid,
    apply_gradient,
    apply_laplacian,
    make_grid,
    norm_h1,
    norm_h2,
    norm_l2,
)
from .harness import (
    ConvergenceReport,
    MethodSweep,
    SweepSpec,
    compute_error,
    default_tau_list,
    fit_order,
    run_sweep,
    write_report,
)
from .integrators import (
    METHOD_IDS,
    IntegrationResult,
    integrate,
    rk4_reference_solve,
    rk4_segment,
    sample_initial,
    step_classical_lie,
    step_classical_strang,
    step_corrected_first_order,
    step_predictor_corrector,
)
from .linalg import (
    DiffusionStepInput,
    TridiagonalSystem,
    crank_nicolson_diffusion_step,
    implicit_euler_diffusion_step,
    thomas_solve,
    trbdf2_diffusion_step,
)
from .problems import (
    BoundarySpec,
    Nonlinearity,
    Problem,
    available_problems,
    evaluate_nonlinearity,
    make_example,
)

__version__ = "0.1.0"

__all__ = [
    "BoundarySpec",
    "ConvergenceReport",
    "DiffusionStepInput",
    "Grid",
    "IntegrationResult",
    "METHOD_IDS",
    "MethodSweep",
    "NonFiniteStateError",
    "Nonlinearity",
    "Problem",
    "SingularSystemError",
    "StabilityViolationError",
    "SweepSpec",
    "TridiagonalSystem",
    "UndefinedOrderError",
    "apply_gradient",
    "apply_laplacian",
    "available_problems",
    "compute_error",
    "crank_nicolson_diffusion_step",
    "default_tau_list",
    "evaluate_nonlinearity",
    "fit_order",
    "implicit_euler_diffusion_step",
    "integrate",
    "make_example",
    "make_grid",
    "norm_h1",
    "norm_h2",
    "norm_l2",
    "rk4_reference_solve",
    "rk4_segment",
    "run_sweep",
    "sample_initial",
    "step_classical_lie",
    "step_classical_strang",
    "step_corrected_first_order",
    "step_predictor_corrector",
    "thomas_solve",
    "trbdf2_diffusion_step",
    "write_report",
]
