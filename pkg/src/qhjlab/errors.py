"""Exception types shared across the solver modules."""


class QhjError(Exception):
    """Base class for all qhjlab errors."""


class ConfigError(QhjError):
    """Invalid configuration, schema violation, or bad CLI input."""


class AnalyticDomainError(QhjError):
    """Evaluation point outside the declared analytic domain."""


class NoBoundStateError(QhjError):
    """Requested level index beyond the well's bound-state count."""


class NoClassicalRegionError(QhjError):
    """Energy at or below the well minimum: no classical region exists."""


class MultipleClassicalRegionsError(QhjError):
    """More than two real turning points at this energy (multi-well)."""


class NonlinearTurningPointError(QhjError):
    """Degenerate (non-simple) turning point; derivation assumes F' != 0."""


class ForbiddenRegionError(QhjError):
    """Classically forbidden point passed where an allowed one is required."""


class QuadratureFailureError(QhjError):
    """Quadrature failed to converge within the iteration budget."""


class ContourDomainError(QhjError):
    """Contour would exceed the potential's analytic domain."""


class NodeOnContourError(QhjError):
    """Wavefunction zero lies on (or numerically on) the contour."""


class StiffTransportError(QhjError):
    """Step-size underflow while transporting along the contour."""


class AmbiguousPoleCountError(QhjError):
    """Loop integral too far from an integer: pole cluster near the contour."""


class RiccatiPoleError(QhjError):
    """Riccati transport blew up: pole encountered along the path."""


class TurningPointSingularityError(QhjError):
    """Expansion requested at (or too close to) a turning point."""


class LevelCapacityError(QhjError):
    """Requested level beyond the well's capacity."""


class DomainTooWideError(QhjError):
    """Shooting overflowed before reaching the matching point."""


class AmbiguousCountError(QhjError):
    """Energy too close to an eigenvalue for a reliable node count."""


class QuantizationMismatchError(QhjError):
    """Loop action disagrees with the target level after refinement.

    Carries the offending ActionResult for diagnosis.
    """

    def __init__(self, message, action_result=None):
        super().__init__(message)
        self.action_result = action_result


class OffShellLoopError(QhjError):
    """Loop requested at a coordinate energy that is not an eigenvalue."""


class OracleConvergenceError(QhjError):
    """Oracle eigenvalue not stable under grid refinement."""


#: Errors that map to CLI exit code 3 (numerical non-convergence).
CONVERGENCE_ERRORS = (
    QuadratureFailureError,
    NodeOnContourError,
    StiffTransportError,
    AmbiguousPoleCountError,
    RiccatiPoleError,
    DomainTooWideError,
    QuantizationMismatchError,
    OracleConvergenceError,
)
