"""Exception types shared by all decayscope modules."""


class DecayscopeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(DecayscopeError):
    """An argument violates a documented precondition."""


class NumericalFailure(DecayscopeError):
    """A numerical routine failed to converge or overflowed."""


class NotPositiveDefinite(DecayscopeError):
    """A matrix required to be Hermitian positive definite is not."""


class DegenerateProfile(DecayscopeError):
    """A damping profile is evaluated at a point where it is undefined."""
