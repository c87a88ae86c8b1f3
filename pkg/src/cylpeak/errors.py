"""Exception hierarchy shared across the package."""


class CylpeakError(Exception):
    """Base class for all package-specific failures."""


class DomainError(CylpeakError, ValueError):
    """Argument outside the mathematical domain of the function."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole."""


class NonConvergent(CylpeakError):
    """An infinite sum or product failed to converge within its budget."""


class QuadratureFailure(CylpeakError):
    """A quadrature did not reach the requested tolerance."""


class ContourError(CylpeakError):
    """Contour radii violate the analyticity conditions of the integrand."""


class InfeasibleContour(ContourError):
    """No contour satisfies the constraints (should not happen for valid parameters)."""


class PrecisionError(CylpeakError):
    """A resolution-doubling check moved the result by more than the tolerance."""


class NoConvergence(CylpeakError):
    """Nystrom node doubling exhausted its budget without stabilizing."""


class TailNotDecaying(CylpeakError):
    """A discrete kernel diagonal did not decay within the dimension cap."""


class ScaleError(CylpeakError, ValueError):
    """A scaling map produced an out-of-range discrete parameter."""


class BudgetExceeded(CylpeakError):
    """Enumeration exceeded its internal safety cap."""


class EmptySample(CylpeakError, ValueError):
    """An empirical statistic was requested for an empty sample."""
