"""Exception hierarchy for spherewave."""

from __future__ import annotations


class SphereWaveError(Exception):
    """Base class for all library errors."""

    code = "error"


class ChartOverflow(SphereWaveError):
    code = "ChartOverflow"


class PreconditionViolation(SphereWaveError, ValueError):
    code = "PreconditionViolation"


class DomainError(SphereWaveError, ValueError):
    code = "DomainError"


class PoleError(SphereWaveError, ValueError):
    code = "PoleError"


class NoConvergence(SphereWaveError, RuntimeError):
    code = "NoConvergence"


class SingularPoint(SphereWaveError, ValueError):
    code = "SingularPoint"


class StepTooLarge(SphereWaveError, RuntimeError):
    code = "StepTooLarge"


class SingularOnPath(SphereWaveError, RuntimeError):
    code = "SingularOnPath"


class OrientationUnresolved(SphereWaveError, RuntimeError):
    code = "OrientationUnresolved"


class ContourError(SphereWaveError, ValueError):
    """Raised when contour segments fail the continuity invariants."""

    code = "ContourError"


class DomainViolation(SphereWaveError, ValueError):
    code = "DomainViolation"


class NoValidDomain(SphereWaveError, ValueError):
    code = "NoValidDomain"


class SourceCoincidence(SphereWaveError, ValueError):
    code = "SourceCoincidence"


class TailNotConverged(SphereWaveError, RuntimeError):
    code = "TailNotConverged"


class StencilTooClose(SphereWaveError, ValueError):
    code = "StencilTooClose"


class ChartInvalid(SphereWaveError, ValueError):
    code = "ChartInvalid"
