"""Exception types shared across the package."""

from __future__ import annotations


class DejaboomError(Exception):
    """Base class for all package errors."""


class WorldParseError(DejaboomError):
    """World document is not well-formed; carries the offending field or position."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class WorldValidationError(DejaboomError):
    """A world-spec invariant is violated; names the invariant."""

    def __init__(self, invariant: str, detail: str):
        super().__init__(f"{invariant}: {detail}")
        self.invariant = invariant
        self.detail = detail


class UnknownFlagError(DejaboomError):
    """A milestone flag id is not declared in the world spec."""


class EmptyInputError(DejaboomError):
    """Player submitted an empty or whitespace-only command."""


class SessionOverError(DejaboomError):
    """Command posted to a session that already finished."""


class ProviderError(DejaboomError):
    """A provider operation failed; retryable unless stated otherwise."""

    def __init__(self, message: str, retryable: bool = True):
        super().__init__(message)
        self.retryable = retryable


class ProviderTimeout(ProviderError):
    """Provider call exceeded its timeout."""


class SessionNotFoundError(DejaboomError):
    """No persisted session under the requested id."""


class CorruptLogError(DejaboomError):
    """Persisted log is damaged; carries the seq of the first bad record."""

    def __init__(self, message: str, seq: int):
        super().__init__(message)
        self.seq = seq


class MalformedLogError(DejaboomError):
    """In-memory log violates ordering guarantees (non-monotone seq etc.)."""


class GraphError(DejaboomError):
    """Invalid narrative-graph operation or document."""
