"""Exception types shared across the package."""

from __future__ import annotations

__all__ = [
    "DixtraceError",
    "InsufficientDataError",
    "UnachievableToleranceError",
    "RouteUnavailableError",
    "ExtrapolationUnreliableError",
    "IllPosedError",
    "DomainError",
    "InvariantViolation",
]


class DixtraceError(Exception):
    """Base class for errors raised by this package."""


class InsufficientDataError(DixtraceError):
    """Requested index or window exceeds the available sequence data."""


class UnachievableToleranceError(DixtraceError):
    """A certified error bound could not be pushed below the requested tolerance.

    Carries the best achieved value and bound so callers can degrade gracefully.
    """

    def __init__(self, message: str, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class RouteUnavailableError(DixtraceError):
    """An evaluation route does not apply to the given operator pair."""


class ExtrapolationUnreliableError(DixtraceError):
    """Extrapolation rejected its own model fit; raw data attached."""

    def __init__(self, message: str, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class IllPosedError(DixtraceError):
    """Normalization failed (non-convergent or vanishing denominator)."""


class DomainError(DixtraceError):
    """Input outside the mathematical domain of the operation."""


class InvariantViolation(DixtraceError):
    """Declared data invariant failed a lazy runtime check."""
