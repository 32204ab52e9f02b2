"""Exception types shared across locbounds."""


class LocBoundsError(Exception):
    """Base class for all library errors."""


class DomainError(LocBoundsError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class QuadratureError(LocBoundsError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    The achieved error estimate is kept on ``achieved_error`` so callers can
    decide whether the partial result is still usable.
    """

    def __init__(self, message, achieved_error=None, value=None):
        super().__init__(message)
        self.achieved_error = achieved_error
        self.value = value


class DivergenceError(LocBoundsError, ArithmeticError):
    """An improper integral does not converge for the supplied envelope."""


class TailDivergenceError(DivergenceError):
    """The large-y tail of an envelope is not integrable."""
