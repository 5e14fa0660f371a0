"""Exception hierarchy shared across the library."""


class AnnulusLoewnerError(Exception):
    """Base class for all library errors."""


class DomainError(AnnulusLoewnerError):
    """Input point lies outside the domain of the requested operation."""


class PoleProximityError(DomainError):
    """Evaluation point is too close to a kernel pole."""


class BranchCutError(DomainError):
    """Argument hits the branch cut of a logarithm-based map."""


class ConvergenceError(AnnulusLoewnerError):
    """Series truncation failed to reach the requested tolerance."""


class NormalizationError(AnnulusLoewnerError):
    """Measure pair violates the unit total-mass constraint."""


class MonotonicityViolation(AnnulusLoewnerError):
    """Radius path increases somewhere on the inspected grid."""


class RangeViolation(AnnulusLoewnerError):
    """Radius path leaves the admissible range [0, 1)."""


class StepFailure(AnnulusLoewnerError):
    """Adaptive integrator hit the minimum step size without converging."""


class BoundaryTermination(AnnulusLoewnerError):
    """Trajectory came within the guard distance of the annulus boundary."""


class LiftingError(AnnulusLoewnerError):
    """Continuous logarithm tracking failed along a trajectory."""


class BandViolation(AnnulusLoewnerError):
    """Slit-evolution state left the band where the theory confines it."""


class ScenarioError(AnnulusLoewnerError):
    """Scenario file is malformed or fails schema validation."""
