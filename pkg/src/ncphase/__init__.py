"""ncphase: linear-form engine for noncommutative phase-space kinematics."""

from .algebra import (
    CanonicalVar,
    CommutatorResult,
    LinearForm,
    commutator,
    form_distance,
    form_equal,
    p1,
    p2,
    variable,
    x1,
    x2,
)
from .composite import (
    CompositeSystem,
    Particle,
    com_canonical,
    com_rep_algebraic,
    com_rep_direct,
    com_simple_algebraic,
    com_simple_direct,
    compare_com_reps,
    compare_com_simple,
    effective_params,
)
from .dynamics import (
    QuadraticHamiltonian,
    Trajectory,
    build_hamiltonian,
    energy_drift,
    evolve,
    nc_initial_state,
    wep_deviation,
    wep_deviation_fixed,
)
from .errors import (
    ConfigError,
    DegenerateError,
    DomainError,
    NCPhaseError,
    SingularMapError,
    StepError,
)
from .reports import CheckRecord, CheckReport
from .representation import (
    MassConditions,
    NCParams,
    Representation,
    branch_transform_residual,
    build_branch_rep,
    build_epsilon_rep,
    build_representation,
    build_simple_rep,
    check_branch_transform,
    check_commutative_limit,
    effective_planck,
    epsilon_factor,
    kinematic_invariance,
    mass_invariance_report,
    params_from_conditions,
    primed_params,
    verify_nc_algebra,
)

__version__ = "0.1.0"

__all__ = [
    "CanonicalVar",
    "CheckRecord",
    "CheckReport",
    "CommutatorResult",
    "CompositeSystem",
    "ConfigError",
    "DegenerateError",
    "DomainError",
    "LinearForm",
    "MassConditions",
    "NCParams",
    "NCPhaseError",
    "Particle",
    "QuadraticHamiltonian",
    "Representation",
    "SingularMapError",
    "StepError",
    "Trajectory",
    "branch_transform_residual",
    "build_branch_rep",
    "build_epsilon_rep",
    "build_hamiltonian",
    "build_representation",
    "build_simple_rep",
    "check_branch_transform",
    "check_commutative_limit",
    "com_canonical",
    "com_rep_algebraic",
    "com_rep_direct",
    "com_simple_algebraic",
    "com_simple_direct",
    "commutator",
    "compare_com_reps",
    "compare_com_simple",
    "effective_params",
    "effective_planck",
    "energy_drift",
    "epsilon_factor",
    "evolve",
    "form_distance",
    "form_equal",
    "kinematic_invariance",
    "mass_invariance_report",
    "nc_initial_state",
    "p1",
    "p2",
    "params_from_conditions",
    "primed_params",
    "variable",
    "verify_nc_algebra",
    "wep_deviation",
    "wep_deviation_fixed",
    "x1",
    "x2",
    "__version__",
]
