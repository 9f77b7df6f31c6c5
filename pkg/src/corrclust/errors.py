"""Exception types shared across the package."""


class SizeLimitError(ValueError):
    """Instance is too large for an exact computation."""


class TraceMismatchError(ValueError):
    """An execution trace does not replay consistently against the given graph."""


class ClassificationViolationError(AssertionError):
    """A clustering mistake matched zero or more than one mistake type."""
