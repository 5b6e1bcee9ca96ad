class ValidationError(ValueError):
    """Input data violates a documented contract (bad line, duplicate id, ...)."""


class FormatError(ValidationError):
    """A binary artifact is truncated, corrupted, or written by another format version."""
