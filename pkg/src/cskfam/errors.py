"""Exception and warning types shared across the package."""


class CskfamError(Exception):
    """Base class for all toolkit errors."""


class DomainError(CskfamError, ValueError):
    """An argument lies outside the admissible domain of an operation."""


class SingularityError(DomainError):
    """Evaluation requested at a singular point (on the support, at a pole)."""


class InsufficientDataError(CskfamError, ValueError):
    """A truncated representation does not carry enough information."""


class AccuracyError(CskfamError, RuntimeError):
    """Numerical quadrature or extrapolation failed to reach its tolerance.

    Carries the best available estimate so callers can degrade gracefully.
    """

    def __init__(self, message: str, best_estimate: float | complex | None = None):
        super().__init__(message)
        self.best_estimate = best_estimate


class NumericError(CskfamError, RuntimeError):
    """Root bracketing or iteration failed for numerical reasons."""


class MeasureSpecError(CskfamError, ValueError):
    """A measure specification document is malformed.

    ``location`` points at the offending field (JSON-path style) or at the
    line/column for syntax errors.
    """

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class FormalPowerWarning(UserWarning):
    """A convolution power was computed outside its guaranteed regime.

    The coefficient arithmetic is well defined, but the result is a formal
    moment sequence that may not correspond to a probability measure.
    """


class TruncationAccuracyWarning(UserWarning):
    """A truncated-series evaluation was requested outside its trust region."""
