"""Exception types shared across the package."""


class KamasError(Exception):
    """Base class for all errors raised by this package."""


class InputError(KamasError):
    """Rejected caller input: empty names, bad ranges, unusable values."""


class ParseError(KamasError):
    """Malformed file content. Carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class IntegrityError(KamasError):
    """Internal consistency violation: dangling rule refs, cyclic grammars."""


class NotFoundError(KamasError):
    """Lookup of an id that does not exist."""


class ConflictError(KamasError):
    """Write rejected because it collides with existing state."""


class PreconditionError(KamasError):
    """Operation requires state the session does not have yet."""


class FilterError(KamasError):
    """Invalid filter state, e.g. an uncompilable regex pattern."""
