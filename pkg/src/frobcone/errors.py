"""Exception hierarchy shared by the library and the CLI."""


class FrobconeError(Exception):
    """Base class for all package errors."""


class ValidationError(FrobconeError, ValueError):
    """Input data does not describe a valid object."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class NotPointed(ValidationError):
    pass


class NotFullDim(ValidationError):
    pass


class NonPrimitiveFacet(ValidationError):
    pass


class RedundantFacet(ValidationError):
    pass


class NotPrime(ValidationError):
    pass


class NotPrimary(ValidationError):
    """The ideal (or sop) does not have a bounded quotient complement."""


class DimensionMismatch(ValidationError):
    pass


class SupportError(ValidationError):
    """A class vector has support outside the coordinate system it is tested in."""


class ResourceGuardExceeded(FrobconeError, RuntimeError):
    """A computation would enumerate more points than the configured limit."""

    def __init__(self, needed, limit, what="points"):
        super().__init__(f"{what}: {needed} exceeds the configured limit {limit}")
        self.needed = needed
        self.limit = limit


class InvariantViolation(FrobconeError, AssertionError):
    """An internal consistency check failed. Never expected on valid input."""
