"""Shared exception types."""


class ChannelFormatError(ValueError):
    """Malformed channel description; carries the offending field path."""

    def __init__(self, message, field=None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class ResourceLimitError(RuntimeError):
    """A dimension or alphabet cap was exceeded."""


class SingularInputError(ValueError):
    """A divergence inside a solver vanished on a supported symbol."""


class NonConvergenceError(RuntimeError):
    """An iterative solve exhausted its budget without meeting tolerance."""
