class EmoroleError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(EmoroleError):
    """A text input (interchange file, annotation file, rule document) is malformed.

    line -- 1-based line number of the offending line, when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class IntegrityError(EmoroleError):
    """Data violates a structural invariant (dangling link, span out of range, id mismatch)."""


class CompileError(EmoroleError):
    """A rule document failed validation; the message names the offending rule."""

    def __init__(self, message, rule_id=None):
        if rule_id is not None:
            message = f"rule {rule_id!r}: {message}"
        super().__init__(message)
        self.rule_id = rule_id


class NotFoundError(EmoroleError):
    """A requested document or annotation file does not exist in the store."""


class StoreLockError(EmoroleError):
    """Another writer holds the per-document lock."""
