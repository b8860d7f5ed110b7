"""Exception types shared across the package."""


class DisturbanceError(Exception):
    """Base class for every error raised by this package."""


class NonSquareInput(DisturbanceError):
    """A matrix operation expected a square matrix."""


class NonHermitianInput(DisturbanceError):
    """Hermiticity deviation above the accepted tolerance."""


class DimensionMismatch(DisturbanceError):
    """Operands or tensor-factor dimensions are inconsistent."""


class ScopeOutOfRange(DisturbanceError):
    """A measurement scope addresses a factor the state does not have."""


class NotAQubit(DisturbanceError):
    """A Bloch-sphere operation was given a non-two-level state."""


class BlochVectorTooLong(DisturbanceError):
    """Bloch vector norm exceeds one beyond tolerance."""


class InvalidDistribution(DisturbanceError):
    """Probability vector is negative, empty, or badly normalized."""


class DomainError(DisturbanceError):
    """Scalar argument outside the domain of a formula."""


class InvalidKrausSet(DisturbanceError):
    """Kraus operators do not resolve the identity."""


class OptimizerFailure(DisturbanceError):
    """Every optimizer restart diverged to a non-finite objective."""


class ReportInvariantViolation(DisturbanceError):
    """A produced report failed its own consistency checks."""
