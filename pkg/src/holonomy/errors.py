"""Exception types raised across the package."""


class HolonomyError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(HolonomyError, ValueError):
    """Malformed or out-of-domain input (bad matrix, non-positive height, ...)."""


class NumericOverflow(HolonomyError, ArithmeticError):
    pass


class IsIdentity(HolonomyError, ValueError):
    pass


class NotHyperbolic(HolonomyError, ValueError):
    pass


class SharedFixedPoint(HolonomyError, ValueError):
    pass


class AmbiguousNearBoundary(HolonomyError, ArithmeticError):
    """A twist residue sits too close to the edge of its region interval."""


class InV(HolonomyError, ValueError):
    """The character lies in the virtually-abelian set V."""


class KappaTooSmall(HolonomyError, ValueError):
    pass


class IterationCap(HolonomyError, RuntimeError):
    """Internal failure: a provably terminating loop hit its safety cap."""


class NotSimple(HolonomyError, ValueError):
    pass


class TwistAngleMismatch(HolonomyError, RuntimeError):
    pass


class ConstructionFailed(HolonomyError, RuntimeError):
    pass


class DepthTooLarge(HolonomyError, ValueError):
    pass
