"""Exception hierarchy shared by all modules."""


class NBodyError(Exception):
    """Base class for every error raised by nbodystab."""


class InvalidInputError(NBodyError, ValueError):
    pass


class UnsupportedDimensionError(InvalidInputError):
    pass


class DegenerateInputError(InvalidInputError):
    pass


class InvalidSubspaceError(InvalidInputError):
    pass


class CollisionError(NBodyError, ArithmeticError):
    """Two bodies coincide (or nearly so) where the potential is evaluated."""


class CollisionApproachError(CollisionError):
    """Integration stalled near a collision.

    Attributes
    ----------
    t : float
        Time of the last accepted state.
    x, v : numpy.ndarray
        Last accepted positions and velocities (flat, length N*d).
    """

    def __init__(self, message, t=None, x=None, v=None):
        super().__init__(message)
        self.t = t
        self.x = x
        self.v = v


class SearchFailureError(NBodyError, RuntimeError):
    pass


class HypothesisError(NBodyError):
    """A theorem's hypothesis does not hold for the supplied data."""


class NotFoundError(NBodyError, LookupError):
    pass
