"""Exception hierarchy shared by all modules."""


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class DomainError(GeometryError):
    """Argument outside the domain of an operation (zero direction, zero vector)."""


class DegenerateBodyError(GeometryError):
    """Body with (near) zero area/volume, repeated or collinear vertices."""


class PreconditionError(GeometryError):
    """An operation's precondition does not hold (origin not interior, body not symmetric, ...)."""


class NumericalError(RuntimeError):
    """Internal failure of a numerical routine that valid inputs should never trigger."""
