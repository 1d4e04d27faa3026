"""Exception types shared across coxrep."""


class CoxrepError(Exception):
    """Base class for all coxrep failures."""


class CoxeterMatrixError(CoxrepError, ValueError):
    """A Coxeter matrix document could not be accepted."""


class MalformedMatrixError(CoxeterMatrixError):
    pass


class AsymmetricMatrixError(CoxeterMatrixError):
    pass


class DiagonalError(CoxeterMatrixError):
    pass


class OffDiagonalError(CoxeterMatrixError):
    pass


class ToleranceError(CoxrepError, ArithmeticError):
    """A root coordinate fell inside the undecidable band around zero.

    Callers are expected to fall back to the exact combinatorial reduction.
    """


class BallCapExceeded(CoxrepError):
    def __init__(self, radius_reached, size, cap):
        self.radius_reached = radius_reached
        self.size = size
        self.cap = cap
        super().__init__(
            f"ball enumeration exceeded cap {cap} (reached radius "
            f"{radius_reached} with {size} elements)"
        )


class ReflectionTableTooSmall(CoxrepError, LookupError):
    """A reflection needed by an N-set is missing from the enumerated table."""


class BallOverflow(CoxrepError, LookupError):
    """A translated element left the codomain ball."""


class NotPositiveSemidefinite(CoxrepError, ValueError):
    pass


class NotHermitian(CoxrepError, ValueError):
    pass


class QuadratureError(CoxrepError, ArithmeticError):
    pass
