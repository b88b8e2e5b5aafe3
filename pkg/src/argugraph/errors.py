"""Exception hierarchy shared across the package."""

from __future__ import annotations


class ArgugraphError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ArgugraphError):
    """Input violates a domain invariant.

    ``violations`` carries structured details when the error came from a
    whole-graph check (see ``graph.validate_graph``).
    """

    def __init__(self, message: str, violations: list | None = None):
        super().__init__(message)
        self.violations = violations or []


class NotFoundError(ArgugraphError):
    """A referenced graph, node, edge, document, or session does not exist."""


class ConflictError(ArgugraphError):
    """The operation collides with existing state (duplicate id, stale revision)."""


class DocumentParseError(ArgugraphError):
    """A serialized document does not conform to its schema."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class ProviderError(ArgugraphError):
    """Transport-level failure talking to the chat-completion provider (retryable)."""


class ProviderConfigError(ArgugraphError):
    """No usable provider configuration was found."""


class ReplyFormatError(ArgugraphError):
    """The provider kept answering outside the required reply schema."""


class ClassificationFailedError(ReplyFormatError):
    """Edge or evidence classification produced no schema-valid reply."""


class GenerationFailedError(ReplyFormatError):
    """Assumption generation produced no schema-valid reply."""
