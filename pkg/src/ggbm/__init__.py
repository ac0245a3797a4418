"""Generalized grey Brownian motion toolkit.

Special functions (Mittag-Leffler, M-Wright), increment covariance and
chain couplings, subordinated finite-dimensional densities and energy
functions, and exact path sampling with Monte Carlo validation.
"""

from . import errors
from .errors import (
    AccuracyNotMet,
    BetaIsOne,
    DimensionMismatch,
    DomainError,
    EmptySample,
    EnergyOverflow,
    GgbmError,
    InvalidBeta,
    NonFiniteIntegrand,
    NotPositiveDefinite,
    ToleranceNotMet,
)
from .quadrature import QuadratureSpec, integrate_halfline
from .specfun import (
    DEFAULT_ACCURACY,
    SeriesAccuracy,
    airy_ai,
    bessel_k0,
    gamma_fn,
    mittag_leffler_neg,
    mwright,
    mwright_arr,
    mwright_density_d,
    mwright_laplace_check,
)

__all__ = [
    "AccuracyNotMet",
    "BetaIsOne",
    "DEFAULT_ACCURACY",
    "DimensionMismatch",
    "DomainError",
    "EmptySample",
    "EnergyOverflow",
    "GgbmError",
    "InvalidBeta",
    "NonFiniteIntegrand",
    "NotPositiveDefinite",
    "QuadratureSpec",
    "SeriesAccuracy",
    "ToleranceNotMet",
    "airy_ai",
    "bessel_k0",
    "errors",
    "gamma_fn",
    "integrate_halfline",
    "mittag_leffler_neg",
    "mwright",
    "mwright_arr",
    "mwright_density_d",
    "mwright_laplace_check",
]

__version__ = "0.1.0"
