"""frontlab: reachable sets, limit shapes, and homogenization for
controlled front propagation in periodic / random-in-time media."""

from .environment import (
    Environment,
    EnvironmentSpec,
    Mode,
    DriftSpec,
    TimeReversedField,
    FrozenTimeField,
    build_environment,
    eval_velocity,
    shift_time,
)
from .geometry import (
    GridSet,
    Polytope,
    convex_hull,
    hausdorff,
    hausdorff_directed,
    minkowski_sum,
    support_function,
    caratheodory_decompose,
)
from .fields import ScalarField
from .reachable import (
    FrontStepper,
    ReachResult,
    reach,
    reach_step,
    reach_enlarged,
    translate_check,
    minimal_time,
    extract_discrete_path,
)
from .paths import (
    AdmissiblePath,
    RealizingPathReport,
    validate_path,
    bridge,
    extremal_trajectory,
    rotation_number,
    construct_realizing_path,
)
from .averaging import (
    LimitShapeEstimate,
    estimate_limit_shape,
    check_subadditivity,
    uniform_convergence_report,
)
from .effective import EffectiveModel, effective_hamiltonian, solve_homogenized
from .hjsolver import (
    SolverConfig,
    EpsScaledField,
    solve_oscillatory_fd,
    solve_by_control,
    solve_noncoercive,
)
from . import exceptions

__version__ = "0.1.0"

__all__ = [
    "Environment",
    "EnvironmentSpec",
    "Mode",
    "DriftSpec",
    "TimeReversedField",
    "FrozenTimeField",
    "build_environment",
    "eval_velocity",
    "shift_time",
    "GridSet",
    "Polytope",
    "convex_hull",
    "hausdorff",
    "hausdorff_directed",
    "minkowski_sum",
    "support_function",
    "caratheodory_decompose",
    "ScalarField",
    "FrontStepper",
    "ReachResult",
    "reach",
    "reach_step",
    "reach_enlarged",
    "translate_check",
    "minimal_time",
    "extract_discrete_path",
    "AdmissiblePath",
    "RealizingPathReport",
    "validate_path",
    "bridge",
    "extremal_trajectory",
    "rotation_number",
    "construct_realizing_path",
    "LimitShapeEstimate",
    "estimate_limit_shape",
    "check_subadditivity",
    "uniform_convergence_report",
    "EffectiveModel",
    "effective_hamiltonian",
    "solve_homogenized",
    "SolverConfig",
    "EpsScaledField",
    "solve_oscillatory_fd",
    "solve_by_control",
    "solve_noncoercive",
    "exceptions",
]
