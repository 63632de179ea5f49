"""Exception types raised across the package."""


class HiggsFlowError(Exception):
    """Base class for all package errors."""


class GridMismatch(HiggsFlowError, ValueError):
    """Field shape does not match the torus grid."""


class SolvabilityViolation(HiggsFlowError, ValueError):
    """Poisson right-hand side has a nonzero mean beyond tolerance."""


class SelfadjointnessViolation(HiggsFlowError, ValueError):
    """An endomorphism field is not selfadjoint for the given metric."""


class SpectrumNotPositive(HiggsFlowError, ValueError):
    """Relative endomorphism of two metrics has a non-positive eigenvalue."""


class InvalidMetric(HiggsFlowError, ValueError):
    """Matrix field is not Hermitian positive definite."""


class NonPositiveDeterminant(HiggsFlowError, ValueError):
    """det(k^-1 h) is not a positive real number."""


class StepCollapse(HiggsFlowError, RuntimeError):
    """Time step was halved too many times without an acceptable step."""


class DivergedMetric(HiggsFlowError, RuntimeError):
    """Metric condition number exceeded the divergence threshold."""


class UnknownEntry(HiggsFlowError, KeyError):
    """Catalog name is not registered."""


class InconsistentSequence(HiggsFlowError, ValueError):
    """Ranks or degrees of an exact sequence do not add up."""


class QuadratureWarning(UserWarning):
    """Quadrature is under-resolved."""
