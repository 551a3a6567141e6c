"""Exception types shared across the toolkit."""


class GpnavError(Exception):
    """Base class for all gpnav errors."""


class InvalidInputError(GpnavError, ValueError):
    """An argument violates a documented precondition."""


class InvalidIntervalError(InvalidInputError):
    """A time interval is empty or reversed."""


class NumericalConditioningError(GpnavError):
    """A matrix factorization failed; carries the last usable iterate."""

    def __init__(self, message: str, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class PlanningFailedError(GpnavError):
    """No feasible path was produced (no-path, timeout or sample budget)."""

    def __init__(self, reason: str, diagnostics=None):
        super().__init__(reason)
        self.reason = reason
        self.diagnostics = diagnostics
