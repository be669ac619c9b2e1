"""fracgreen: explicit fractional-Laplacian Green's functions on the ball
and half-space, integral-equation solvers, and certification suites."""

from .errors import (
    ConfigError,
    DegenerateError,
    DomainError,
    FracGreenError,
    NonConvergenceError,
    ParameterError,
    QuadratureError,
    SingularityError,
    TruncationError,
    UsageError,
)
from .params import HALF_SPACE, UNIT_BALL, DomainKind, ModelParams
from .solver import (
    CascadeReport,
    SolveOptions,
    SolveResult,
    SweepReport,
    dirichlet_solve,
    dirichlet_value,
    green_matrix,
    liouville_cascade,
    moving_plane_sweep,
    nonlinear_power_solve,
    radial_operator,
)
from .verify import SUITE_NAMES, SuiteReport, run_suite
from .config import Config, load_config

__version__ = "0.1.0"

__all__ = [
    "ModelParams",
    "DomainKind",
    "UNIT_BALL",
    "HALF_SPACE",
    "SolveOptions",
    "SolveResult",
    "SweepReport",
    "CascadeReport",
    "green_matrix",
    "dirichlet_solve",
    "dirichlet_value",
    "nonlinear_power_solve",
    "radial_operator",
    "moving_plane_sweep",
    "liouville_cascade",
    "SuiteReport",
    "SUITE_NAMES",
    "run_suite",
    "Config",
    "load_config",
    "FracGreenError",
    "ParameterError",
    "DomainError",
    "SingularityError",
    "QuadratureError",
    "TruncationError",
    "DegenerateError",
    "NonConvergenceError",
    "ConfigError",
    "UsageError",
    "__version__",
]
