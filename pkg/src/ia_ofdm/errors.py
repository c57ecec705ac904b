"""Exception hierarchy shared across the package."""


class NumericalError(ArithmeticError):
    """Base class for failures caused by floating point conditioning."""


class SingularChannelError(NumericalError):
    """A channel block needed for inversion is (numerically) singular."""


class ConditioningError(NumericalError):
    """Precoder construction produced non-finite entries."""


class DecodeInfeasibleError(NumericalError):
    """A stacked decoding matrix is too ill-conditioned to invert."""


class QuadratureError(NumericalError):
    """Numerical integration did not reach the requested tolerance."""


class DefectiveMatrixError(NumericalError):
    """A 2x2 matrix has a repeated eigenvalue and no eigenbasis."""


class InfeasiblePlanError(ValueError):
    """Too few subcarriers for even one precoding group."""
