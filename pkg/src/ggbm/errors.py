"""Exception hierarchy shared across the package."""


class GgbmError(Exception):
    """Base class for all package-specific errors."""


class InvalidBeta(GgbmError):
    """Order parameter beta outside its admissible range."""


class BetaIsOne(InvalidBeta):
    """M-Wright at beta=1 is the point mass at 1 and has no pointwise density.

    Callers must branch to the Dirac shortcut instead of evaluating.
    """


class AccuracyNotMet(GgbmError):
    """No evaluation strategy could certify the requested relative error.

    Carries the best available value and its error estimate so callers can
    decide to accept a wider tolerance.
    """

    def __init__(self, message, value=None, err_est=None):
        super().__init__(message)
        self.value = value
        self.err_est = err_est


class DomainError(GgbmError):
    """Argument outside a special function's domain (e.g. a pole of Gamma)."""


class ToleranceNotMet(GgbmError):
    """Adaptive integration exhausted its subdivision budget.

    Carries the best value and certified error estimate reached.
    """

    def __init__(self, message, value=None, err_est=None):
        super().__init__(message)
        self.value = value
        self.err_est = err_est


class NonFiniteIntegrand(GgbmError):
    """Integrand returned NaN or infinity at a quadrature node."""


class NotPositiveDefinite(GgbmError):
    """Covariance matrix failed its Cholesky factorization.

    ``pivot`` is the 1-based index of the first non-positive leading minor.
    """

    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot


class DimensionMismatch(GgbmError):
    """Vector/matrix shapes inconsistent with the declared (d, N)."""


class EnergyOverflow(GgbmError):
    """Energy evaluation produced a non-finite value.

    Carries the squared Mahalanobis norm at which it occurred.
    """

    def __init__(self, message, mahalanobis_sq=None):
        super().__init__(message)
        self.mahalanobis_sq = mahalanobis_sq


class EmptySample(GgbmError):
    """Monte Carlo estimator invoked on an empty path collection."""
