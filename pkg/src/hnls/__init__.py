"""Finite-difference solver for a third-order dispersive Schrodinger
equation posed on an interval whose endpoints move in time."""

__version__ = "0.1.0"

from .boundary import (
    BoundaryProfile,
    MovingDomain,
    WidthViolation,
    computational_to_physical,
    eval_boundary,
    physical_to_computational,
    validate_domain,
)
from .coefficients import CoefficientSlice, evaluate_coefficients
from .diagnostics import (
    ConvergenceReport,
    DiagnosticsRecord,
    conservation_residual,
    convergence_study,
    decay_monitor,
    delta_l2_sweep,
    discrete_h1,
    discrete_l2,
    weighted_norm,
)
from .errors import (
    ConfigError,
    ContractionFailure,
    DomainError,
    MaxPicardExceeded,
    SingularDomainError,
    SolverError,
)
from .gauge import (
    GaugeConstants,
    gauge_constants,
    gauge_forward,
    gauge_inverse,
    kdv_form_residual,
)
from .grid import (
    BandedMatrix,
    GridSpec,
    StateVector,
    apply_backward_difference,
    apply_forward_difference,
    build_first_derivative,
    build_second_derivative,
    build_third_derivative,
)
from .oracle import OracleConfig, dense_solve, reference_integrate
from .scenarios import Scenario, scheme_config_for
from .stepper import (
    SchemeConfig,
    StepReport,
    Trajectory,
    assemble_left_matrix,
    assemble_right_side,
    banded_solve,
    integrate,
    map_to_physical,
    picard_step,
)
