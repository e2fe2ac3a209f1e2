"""Exception types shared across the package."""


class InqkhError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(InqkhError, ValueError):
    """Input text is not in the published grammar."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class KhScopeError(InqkhError, ValueError):
    """Kh applied to a formula that is not purely propositional."""


class ModelError(InqkhError, ValueError):
    """Model document violates a model invariant."""


class EmptyStateError(ModelError):
    """The empty state does not induce a submodel."""


class ResourceError(InqkhError):
    """A configured cap (worlds, resolution space, clauses, atoms) was exceeded.

    Typed so callers can distinguish "too big to decide this way" from a
    wrong answer; the CLI maps it to its own exit code.
    """


class AtomLimitError(ResourceError):
    """Too many distinct atoms for the requested decision route."""


class InternalInconsistencyError(InqkhError):
    """Two provably-equivalent routes disagreed; signals a bug, never expected."""
