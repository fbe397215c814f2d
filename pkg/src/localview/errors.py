"""Exception types shared across the package."""

from __future__ import annotations


class LocalViewError(Exception):
    """Base class for every error raised by localview."""


class InvalidGainError(LocalViewError, ValueError):
    pass


class DimensionError(LocalViewError, ValueError):
    pass


class SizeGuardError(LocalViewError):
    """A search was refused because the instance exceeds a size bound."""


class ContractViolation(LocalViewError, ValueError):
    """An operation was called outside its precondition."""


class NotReducibleError(ContractViolation):
    pass


class InvariantViolation(LocalViewError, AssertionError):
    """A property that must always hold was observed to fail."""


class ScenarioError(LocalViewError, ValueError):
    """Malformed scenario document. ``where`` locates the offending field."""

    def __init__(self, message: str, where: str | None = None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)
