"""Loewner evolution families over systems of annuli.

Construction, integration, and verification of evolution families driven
by Villat-kernel vector fields on shrinking annuli, including the
degenerate punctured-disk case, liftings to the vertical strip, and the
Komatu-Lebedev slit-mapping system.
"""

from .battery import BatteryScenario, non_degenerate_battery, standard_battery
from .domains import DomainSystem, RadiusPath, contains, validate
from .drivers import HerglotzPath, MeasurePath, ScalarDriver, UnitCircleDriver
from .errors import (
    AnnulusLoewnerError,
    BandViolation,
    BoundaryTermination,
    BranchCutError,
    ConvergenceError,
    DomainError,
    LiftingError,
    MonotonicityViolation,
    NormalizationError,
    PoleProximityError,
    RangeViolation,
    ScenarioError,
    StepFailure,
)
from .fields import (
    FieldSpec,
    degenerate_field,
    field_conjugate,
    field_eval,
    field_eval_many,
    fixed_point_field,
    radial_degenerate_field,
    rotation_field,
    whvf_bound,
    whvf_majorant_integral,
)
from .kernels import (
    DEFAULT_KERNEL_CONFIG,
    AnnulusParam,
    KernelEvalConfig,
    circle_mean,
    omega,
    villat_kernel,
    villat_kernel_grid,
    villat_reconstruct,
)
from .lebedev import (
    LebedevSpec,
    MtPath,
    integrate_mt,
    integrate_slit,
    long_time_monitor,
    to_canonical_field,
)
from .lifting import (
    LiftResult,
    StripPoint,
    covering_W,
    disk_to_strip_F,
    lift_commutation_check,
    map_Q,
    map_R,
)
from .measures import (
    CircleMeasure,
    ParametricPSpec,
    caratheodory_p_eval,
    p_bounds_check,
    p_conjugate,
    p_eval,
    p_eval_grid,
    p_free_term,
)
from .ode import (
    EvolutionMap,
    IntegratorConfig,
    Trajectory,
    containment_certificate,
    integrate,
)
from .verify import (
    CheckResult,
    VerificationReport,
    check_containment,
    check_degenerate_extension,
    check_ef_axioms,
    check_fixed_points,
    check_index_preservation,
    check_injectivity,
    check_inversion_symmetry,
    check_lifting,
    probe_ring,
)

__version__ = "0.1.0"
