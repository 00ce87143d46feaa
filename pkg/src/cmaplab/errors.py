"""Shared exception types."""


class ParameterError(ValueError):
    """A generator or noise parameter violates its documented constraints."""


class InternalError(AssertionError):
    """An internal invariant was violated (a bug, not a usage error)."""
