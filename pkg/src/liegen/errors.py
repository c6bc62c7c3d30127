"""Shared exception types."""


class CapExceeded(RuntimeError):
    """A size or iteration cap was exceeded (field size, closure cap,
    enumeration cap, order cap).  Carries the cap and, when known, the
    size that broke it."""

    def __init__(self, message, cap=None, size=None):
        super().__init__(message)
        self.cap = cap
        self.size = size


class InvalidConfig(ValueError):
    """An experiment configuration that cannot be run as given."""
