"""Exception types raised by the computation engine."""


class MotivicError(Exception):
    """Base class for all engine errors."""

    pass


class CoefficientError(MotivicError):
    """Coefficient arithmetic or specialization is undefined for the given input."""

    pass


class MalformedInputError(MotivicError):
    """Input data violates a documented invariant."""

    pass


class RootSystemError(MotivicError):
    pass


class WindowError(MotivicError):
    """A truncation window is empty or an expansion direction is not positive."""

    pass


class ConventionError(MotivicError):
    pass


class OracleBoundsError(MotivicError):
    """Finite-field enumeration was asked for a cell outside the configured bounds."""

    pass
