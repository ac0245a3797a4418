"""Mittag-Leffler and M-Wright functions on the ranges the model needs.

Everything here is driven by two one-parameter families:

* ``E_beta(-x)`` for x >= 0 (Mittag-Leffler on the negative real axis),
  the characteristic-function profile of grey Brownian increments and the
  Laplace transform of the M-Wright density.
* ``M_beta(tau)`` for tau >= 0, the probability density of the random
  variance scale in the subordinated (conditionally Gaussian) picture.

Evaluation strategy, in order of preference and always certified against
the requested relative tolerance:

1. Taylor series with exact (fsum) accumulation, rejected when the
   intrinsic alternating-series cancellation exceeds the tolerance.
2. For E: asymptotic series in 1/x with optimal truncation; for M:
   numerical steepest descent through the real saddle of the Hankel
   integral (the vertical-line contour has no exponential cancellation,
   unlike the collapsed branch-cut form, which blows up for beta > 1/2).
3. For E: the completely monotone spectral representation
   E_beta(-x) = (x sin(pi beta)/pi) *
                int_0^inf e^(-r) r^(beta-1) / (r^(2 beta) + 2 x r^beta
                cos(pi beta) + x^2) dr
   (Gorenflo & Mainardi), integrated adaptively.  This bridges the band
   where neither the series nor the asymptotics certify in double
   precision (roughly x^(1/beta) in (10, 26)).

beta = 1 and beta = 0 are handled as the exact limiting cases e^z,
delta_1 and 1/(1+x), e^(-tau) respectively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .errors import AccuracyNotMet, BetaIsOne, DomainError, InvalidBeta
from .quadrature import QuadratureSpec, integrate_halfline

_EPS = float(np.finfo(float).eps)

# Below this absolute value, deep-tail M-Wright results are accepted on the
# strength of the saddle-point approximation alone: the density integrals
# weight that region exponentially weakly, so no relative certificate is
# required there.
TAIL_ABS_FLOOR = 1e-13


@dataclass(frozen=True)
class SeriesAccuracy:
    """Accuracy contract for series-based special function evaluation."""

    rel_tol: float = 1e-10
    max_terms: int = 400
    series_switch: float = 10.0

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if not self.series_switch > 0:
            raise ValueError("series_switch must be positive")


DEFAULT_ACCURACY = SeriesAccuracy()

_BRIDGE_QUAD = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-11, max_subdivisions=800)


def _validate_beta(beta, *, allow_zero, allow_one):
    b = float(beta)
    if math.isnan(b) or b < 0.0 or b > 1.0:
        raise InvalidBeta(f"beta out of range (0,1]: {beta!r}")
    if b == 0.0 and not allow_zero:
        raise InvalidBeta("beta=0 admitted only where the limiting closed form applies")
    if b == 1.0 and not allow_one:
        raise BetaIsOne("beta=1 is the Dirac limit; callers must branch explicitly")
    return b


def _cancellation_gate(rel_tol):
    # Largest tolerable log of the peak series term, given that the result
    # is O(exp(-peak)) while rounding noise is O(eps * exp(+peak)).
    return math.log(0.05 * rel_tol / _EPS)


# ---------------------------------------------------------------------------
# Mittag-Leffler E_beta(-x)
# ---------------------------------------------------------------------------


def _mlf_series(beta, x, acc):
    """Taylor series sum_{n} (-x)^n / Gamma(beta n + 1), certified."""
    n = np.arange(acc.max_terms + 1, dtype=float)
    # u_n = x^n / Gamma(beta n + 1), built multiplicatively to keep the
    # per-term rounding at O(n eps) instead of O(lgamma * eps)
    ratios = x * np.exp(sp.gammaln(beta * (n[1:] - 1.0) + 1.0) - sp.gammaln(beta * n[1:] + 1.0))
    mags = np.concatenate([[1.0], np.cumprod(ratios)])
    peak = mags.argmax()
    cut = None
    for k in range(peak + 1, mags.size):
        if mags[k] <= max(1e-22 * mags[peak], 1e-4 * acc.rel_tol):
            cut = k
            break
    if cut is None:
        return None
    terms = mags[: cut + 1] * (-1.0) ** (n[: cut + 1] % 2)
    value = math.fsum(terms.tolist())
    err = (8.0 + 0.1 * cut) * _EPS * mags[peak] + mags[cut]
    if value > 0 and err <= acc.rel_tol * value:
        return value, err
    return None


def _mlf_asymptotic(beta, x, acc):
    """E_beta(-x) ~ sum_{n>=1} (-1)^(n+1) x^(-n) / Gamma(1 - beta n).

    Optimal truncation: stop before the first term whose magnitude stops
    decreasing; the remainder is bounded by that term.
    """
    terms = []
    prev_mag = math.inf
    omitted = math.inf
    for k in range(1, min(acc.max_terms, 300) + 1):
        t = (-1.0) ** (k + 1) * x ** (-k) * float(sp.rgamma(1.0 - beta * k))
        mag = abs(t)
        if mag == 0.0:
            terms.append(0.0)
            continue
        if mag >= prev_mag:
            omitted = mag
            break
        terms.append(t)
        prev_mag = mag
        if terms and mag <= 0.01 * acc.rel_tol * abs(math.fsum(terms)):
            omitted = mag
            break
    if not terms or not math.isfinite(omitted):
        # all terms consumed while still decreasing: remainder <= last term
        omitted = prev_mag if terms else math.inf
    value = math.fsum(terms)
    err = 2.0 * omitted + 8.0 * _EPS * math.fsum(abs(t) for t in terms)
    if value > 0 and err <= acc.rel_tol * value:
        return value, err
    return None


def _mlf_bridge(beta, x, acc):
    """Spectral (completely monotone) representation, adaptive quadrature."""
    sinb = math.sin(math.pi * beta)
    cosb = math.cos(math.pi * beta)

    def f(r):
        rb = r ** beta
        den = rb * rb + (2.0 * x * cosb) * rb + x * x
        return np.exp(-r) * r ** (beta - 1.0) / den

    splits = ()
    if cosb < 0.0:
        # Lorentzian-type peak of the spectral density for beta > 1/2
        splits = ((-cosb * x) ** (1.0 / beta),)
    val, qerr = integrate_halfline(f, _BRIDGE_QUAD, split_at=splits, scale_hint=1.0)
    scale = x * sinb / math.pi
    value = scale * val
    err = scale * qerr + 16.0 * _EPS * value
    return value, err


def mittag_leffler_neg(beta, x, acc: SeriesAccuracy = DEFAULT_ACCURACY):
    """Evaluate E_beta(-x) for x >= 0, 0 <= beta <= 1.

    The result lies in (0, 1]; E_beta(0) = 1 exactly.  beta = 1 is the
    exponential, beta = 0 the limiting Laplace transform 1/(1+x).

    Raises AccuracyNotMet when no strategy certifies ``acc.rel_tol``.
    """
    b = _validate_beta(beta, allow_zero=True, allow_one=True)
    x = float(x)
    if math.isnan(x) or x < 0.0:
        raise DomainError(f"x must be >= 0, got {x!r}")
    if x == 0.0:
        return 1.0
    if b == 1.0:
        return math.exp(-x)
    if b == 0.0:
        return 1.0 / (1.0 + x)

    ln_t = math.log(x) / b  # log of x^(1/beta), the cancellation scale
    best = None
    if x <= acc.series_switch and ln_t <= _cancellation_gate(acc.rel_tol):
        res = _mlf_series(b, x, acc)
        if res is not None:
            return res[0]
    if x > 1.0:
        res = _mlf_asymptotic(b, x, acc)
        if res is not None:
            return res[0]
    value, err = _mlf_bridge(b, x, acc)
    if value > 0 and err <= acc.rel_tol * value:
        return value
    raise AccuracyNotMet(
        f"E_beta(-x) at beta={b}, x={x}: certified error {err:.3e} exceeds "
        f"rel_tol={acc.rel_tol:.1e}",
        value=value,
        err_est=err,
    )


# ---------------------------------------------------------------------------
# M-Wright M_beta(tau)
# ---------------------------------------------------------------------------


def _mwright_series_arr(beta, taus, acc):
    """Vectorized Taylor series of W_{-beta,1-beta}(-tau) with certificates.

    Returns (values, ok) where ok marks entries whose cancellation and
    truncation errors pass ``acc.rel_tol``.
    """
    taus = np.asarray(taus, dtype=float)
    nmax = acc.max_terms
    n = np.arange(nmax + 1, dtype=float)
    rg = sp.rgamma(1.0 - beta * (n + 1.0))  # exactly 0 at the Gamma poles
    # u[k, j] = tau_j^k / k!
    with np.errstate(over="ignore"):
        u = np.ones((nmax + 1, taus.size))
        if nmax >= 1:
            u[1:] = np.cumprod(taus[None, :] / n[1:, None], axis=0)
    terms = u * (rg * (-1.0) ** (n % 2))[:, None]
    mags = np.abs(terms)
    peaks = mags.max(axis=0)
    values = np.empty(taus.size)
    ok = np.zeros(taus.size, dtype=bool)
    for j in range(taus.size):
        col = terms[:, j]
        tail = mags[nmax, j]
        values[j] = math.fsum(col.tolist())
        err = (8.0 + 0.1 * nmax) * _EPS * peaks[j] + 2.0 * tail
        if tail <= 1e-3 * acc.rel_tol * max(abs(values[j]), 1e-300):
            ok[j] = err <= acc.rel_tol * abs(values[j]) and values[j] > 0
    return values, ok


def _mwright_saddle_params(beta, x):
    """log(sigma*) and phi(sigma*) for the Hankel integrand exp(s - x s^beta)."""
    ln_sig = math.log(beta * x) / (1.0 - beta)
    ln_depth = math.log1p(-beta) - math.log(beta) + ln_sig  # log of -phi0
    return ln_sig, ln_depth


def mwright_saddle_value(beta, tau):
    """Leading steepest-descent value of M_beta(tau) for large tau.

    sigma* = (beta tau)^(1/(1-beta));
    M ~ sigma*^(beta-1/2) exp(-(1-beta) sigma*/beta) / sqrt(2 pi (1-beta)).
    Exact for beta = 1/2; relative error O(1/sigma*) otherwise.
    """
    b = _validate_beta(beta, allow_zero=False, allow_one=False)
    x = float(tau)
    if x <= 0.0:
        raise DomainError("saddle approximation needs tau > 0")
    ln_sig, ln_depth = _mwright_saddle_params(b, x)
    if ln_depth > 7.0:  # exp(-depth) < exp(-1096): certainly underflows
        return 0.0
    log_m = (b - 0.5) * ln_sig - math.exp(ln_depth) - 0.5 * math.log(2.0 * math.pi * (1.0 - b))
    return math.exp(log_m) if log_m > -745.0 else 0.0


def _mwright_saddle_quad(beta, x, acc):
    """Steepest-descent-line quadrature of the Hankel representation.

    M_beta(x) = (1/pi) Re int_0^inf exp(phi(sig + i y)) (sig + i y)^(beta-1) dy
    with phi(s) = s - x s^beta and sig the real saddle of phi.  Along this
    contour the integrand peaks at y = 0 with value exp(phi(sig)) and decays
    like a Gaussian of half-width sqrt(sig/(1-beta)); no exponentially large
    envelope appears, so double precision retains full relative accuracy.
    """
    ln_sig, ln_depth = _mwright_saddle_params(beta, x)
    if ln_depth > 7.0:
        return 0.0, 0.0
    sig = math.exp(ln_sig)
    phi0 = -math.exp(ln_depth)
    width = math.sqrt(sig / (1.0 - beta))

    def h(ys):
        s = sig + 1j * ys
        with np.errstate(over="ignore", invalid="ignore"):
            vals = np.exp(s - x * s ** beta - phi0) * s ** (beta - 1.0)
        out = vals.real
        return np.where(np.isfinite(out), out, 0.0)

    i_scale = sig ** (beta - 1.0) * width
    spec = QuadratureSpec(
        abs_tol=max(i_scale * 1e-13, 1e-280),
        rel_tol=min(acc.rel_tol / 4.0, 1e-11),
        max_subdivisions=600,
    )
    ival, qerr = integrate_halfline(h, spec, scale_hint=width)
    if ival <= 0.0:
        return 0.0, qerr
    log_m = phi0 + math.log(ival / math.pi)
    value = math.exp(log_m) if log_m > -745.0 else 0.0
    err = (qerr / ival + 64.0 * _EPS) * value
    return value, err


def mwright(beta, tau, acc: SeriesAccuracy = DEFAULT_ACCURACY):
    """Evaluate the M-Wright density M_beta(tau) for tau >= 0, 0 <= beta < 1.

    M_beta(0) = 1/Gamma(1-beta).  beta = 0 returns the limiting exponential
    density e^(-tau); beta = 1 raises BetaIsOne (the law is delta_1 and has
    no pointwise density).

    Deep-tail values below ``TAIL_ABS_FLOOR`` are returned from the
    steepest-descent approximation without a relative certificate; all
    larger values are certified to ``acc.rel_tol``.
    """
    b = _validate_beta(beta, allow_zero=True, allow_one=False)
    t = float(tau)
    if math.isnan(t) or t < 0.0:
        raise DomainError(f"tau must be >= 0, got {tau!r}")
    if b == 0.0:
        return math.exp(-t)
    if t == 0.0:
        return float(sp.rgamma(1.0 - b))
    value, err = _mwright_scalar(b, t, acc)
    if err <= acc.rel_tol * abs(value) or abs(value) <= TAIL_ABS_FLOOR:
        return value
    raise AccuracyNotMet(
        f"M_beta(tau) at beta={b}, tau={t}: certified error {err:.3e} exceeds "
        f"rel_tol={acc.rel_tol:.1e}",
        value=value,
        err_est=err,
    )


def _mwright_scalar(beta, tau, acc):
    gate = _cancellation_gate(acc.rel_tol)
    y_peak = (1.0 - beta) * (beta ** beta * tau) ** (1.0 / (1.0 - beta))
    if tau <= acc.series_switch and 2.0 * y_peak <= gate:
        vals, ok = _mwright_series_arr(beta, np.array([tau]), acc)
        if ok[0]:
            return float(vals[0]), acc.rel_tol * abs(float(vals[0]))
    value, err = _mwright_saddle_quad(beta, tau, acc)
    if err <= acc.rel_tol * abs(value) or abs(value) <= TAIL_ABS_FLOOR:
        return value, err
    return value, err


_TAIL_CACHE: dict = {}
_TAIL_CACHE_MAX = 200_000


def mwright_arr(beta, taus, acc: SeriesAccuracy = DEFAULT_ACCURACY):
    """Vectorized M_beta over an array of nonnegative abscissae.

    Series entries are evaluated in one pass; the rest go through the
    steepest-descent quadrature with memoization (quadrature nodes recur
    across panels of enclosing integrals).
    """
    b = _validate_beta(beta, allow_zero=True, allow_one=False)
    taus = np.asarray(taus, dtype=float)
    if np.any(taus < 0.0):
        raise DomainError("tau must be >= 0")
    if b == 0.0:
        return np.exp(-taus)
    out = np.empty(taus.shape)
    flat = taus.ravel()
    res = out.ravel()
    zero = flat == 0.0
    res[zero] = float(sp.rgamma(1.0 - b))
    todo = ~zero
    if np.any(todo):
        vals, ok = _mwright_series_arr(b, flat[todo], acc)
        idx = np.nonzero(todo)[0]
        res[idx[ok]] = vals[ok]
        for i in idx[~ok]:
            key = (b, flat[i], acc.rel_tol)
            hit = _TAIL_CACHE.get(key)
            if hit is None:
                hit = _mwright_scalar(b, flat[i], acc)[0]
                if len(_TAIL_CACHE) < _TAIL_CACHE_MAX:
                    _TAIL_CACHE[key] = hit
            res[i] = hit
    return out


# ---------------------------------------------------------------------------
# Laplace-transform self-consistency and the d-dimensional density profile
# ---------------------------------------------------------------------------


def mwright_laplace_check(beta, s, acc: SeriesAccuracy = DEFAULT_ACCURACY,
                          quad: QuadratureSpec = None):
    """Return (int_0^inf e^(-s tau) M_beta(tau) dtau, E_beta(-s)).

    The two sides are computed through unrelated pipelines (adaptive
    quadrature of the density vs. series/asymptotics/spectral integral for
    the transform), so their agreement is a strong end-to-end probe.
    """
    b = _validate_beta(beta, allow_zero=False, allow_one=False)
    s = float(s)
    if s < 0.0:
        raise DomainError("s must be >= 0")
    quad = quad or QuadratureSpec()

    def f(taus):
        return np.exp(-s * taus) * mwright_arr(b, taus, acc)

    lhs, _ = integrate_halfline(f, quad, scale_hint=1.0)
    rhs = mittag_leffler_neg(b, s, acc)
    return lhs, rhs


def log_mwright_density_d(beta, x, t, acc: SeriesAccuracy = DEFAULT_ACCURACY,
                          quad: QuadratureSpec = None):
    """log of the d-dimensional M-Wright density profile (see below).

    Computed with a shifted exponent so that strongly decayed profiles stay
    finite in log scale.  Returns +inf where the profile diverges
    (|x| = 0 with d >= 2 and beta < 1).
    """
    b = _validate_beta(beta, allow_zero=True, allow_one=True)
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    d = xv.size
    t = float(t)
    if t <= 0.0:
        raise DomainError("t must be > 0")
    quad = quad or QuadratureSpec()
    r2 = float(xv @ xv)
    if b == 1.0:
        # the weight collapses to a point mass at tau = t
        return math.log(2.0) - 0.5 * d * math.log(4.0 * math.pi * t) - r2 / (4.0 * t)
    if r2 == 0.0 and d >= 2:
        return math.inf

    s = math.exp(-b * math.log(t))  # t^(-beta), overflow-safe

    def log_integrand(taus):
        with np.errstate(divide="ignore"):
            return (
                -0.5 * d * np.log(4.0 * math.pi * taus)
                - r2 / (4.0 * taus)
                + math.log(s)
                + np.log(mwright_arr(b, taus * s, acc))
            )

    probes = np.array([max(r2 / (2.0 * d), 1e-6), 1.0 / s, max(r2 / (2.0 * d), 1e-6) + 1.0 / s])
    shift = float(np.max(log_integrand(probes)))

    def f(taus):
        return np.exp(log_integrand(taus) - shift)

    val, _ = integrate_halfline(f, quad, scale_hint=float(probes[0]))
    return math.log(2.0) + shift + math.log(val)


def mwright_density_d(beta, x, t, acc: SeriesAccuracy = DEFAULT_ACCURACY,
                      quad: QuadratureSpec = None):
    """d-dimensional M-Wright density profile at spatial point x, time t:

        2 int_0^inf (4 pi tau)^(-d/2) exp(-|x|^2/(4 tau))
                    t^(-beta) M_beta(tau t^(-beta)) dtau

    For beta = 1 the weight is a point mass at tau = t and the integral
    collapses to 2 (4 pi t)^(-d/2) exp(-|x|^2/(4 t)).
    """
    lv = log_mwright_density_d(beta, x, t, acc, quad)
    if lv == math.inf:
        return math.inf
    return math.exp(lv)


# ---------------------------------------------------------------------------
# Classical special functions used by the closed forms
# ---------------------------------------------------------------------------


def gamma_fn(x):
    """Gamma(x); raises DomainError at the poles (x a nonpositive integer)."""
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise DomainError(f"Gamma pole at x={x}")
    return float(sp.gamma(x))


def bessel_k0(x):
    """Modified Bessel function K_0(x), x > 0."""
    x = float(x)
    if x <= 0.0:
        raise DomainError("K_0 requires x > 0")
    return float(sp.k0(x))


def airy_ai(x):
    """Airy function Ai(x)."""
    return float(sp.airy(float(x))[0])
