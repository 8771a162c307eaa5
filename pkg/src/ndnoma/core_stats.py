"""Shared statistical primitives.

Gaussian sampling, complex sample moments, the Gaussian tail function, and
the mean/variance formulas for the banded-covariance quadratic forms that
drive variance detection. Everything here is pure given an RNG stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, gammaincc, gammaln

_SQRT2 = math.sqrt(2.0)


def stream(master_seed: int, *key: int) -> np.random.Generator:
    """Independent, reproducible generator for (master_seed, key).

    Built on SeedSequence spawn keys: the same (seed, key) pair yields the
    same stream no matter how many other streams exist or which worker asks
    for it. All parallel code derives its randomness through this.
    """
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=key))


def q_function(x):
    """Gaussian tail probability P(Z > x), Z standard normal.

    Evaluated as erfc(x/sqrt(2))/2, accurate to ~1e-15 relative until the
    result underflows (x ~ 38.6); past that it is exactly 0.0 in double
    precision, far below any error rate of interest here.
    """
    return 0.5 * erfc(np.asarray(x, dtype=np.float64) / _SQRT2)


def draw_real_gaussian(mean, variance, n, rng):
    """n independent draws from N(mean, variance); variance 0 degenerates."""
    if variance < 0:
        raise ValueError(f"variance must be >= 0, got {variance}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return mean + math.sqrt(variance) * rng.standard_normal(n)


def draw_complex_noise(sigma_sq, n, rng):
    """n i.i.d. CN(0, sigma_sq) samples: re/im parts each N(0, sigma_sq/2)."""
    if sigma_sq < 0:
        raise ValueError(f"sigma_sq must be >= 0, got {sigma_sq}")
    sd = math.sqrt(0.5 * sigma_sq)
    return sd * rng.standard_normal(n) + 1j * sd * rng.standard_normal(n)


def sample_mean(frame):
    """Arithmetic mean of a complex frame (length >= 1)."""
    frame = np.asarray(frame)
    if frame.size == 0:
        raise ValueError("frame must contain at least one sample")
    return complex(frame.mean())


def sample_variance(frame):
    """Sample variance of a complex frame about its sample mean.

    (1/(N-1)) * sum |y - ybar|^2, so the frame must have N >= 2.
    """
    frame = np.asarray(frame)
    if frame.size < 2:
        raise ValueError("frame must contain at least two samples")
    centered = frame - frame.mean()
    return float(np.sum(centered.real**2 + centered.imag**2) / (frame.size - 1))


@dataclass(frozen=True)
class SecondOrderStats:
    """Per-sample covariance structure (var_re, var_im, cov) of a complex
    Gaussian sample stream with correlated components."""

    var_re: float
    var_im: float
    cov: float

    def __post_init__(self):
        if self.var_re < 0 or self.var_im < 0:
            raise ValueError("component variances must be >= 0")
        # allow a relative epsilon so float-constructed stats are not rejected
        bound = self.var_re * self.var_im
        if self.cov**2 > bound * (1 + 1e-9) + 1e-300:
            raise ValueError("cov^2 exceeds var_re * var_im: not a covariance")


@dataclass(frozen=True)
class QuadFormMoments:
    """Mean and variance of the mean-removed quadratic form statistic."""

    mean: float
    var: float

    def __post_init__(self):
        if self.var < 0:
            raise ValueError("variance must be >= 0")


def quadform_moments(stats: SecondOrderStats, n: int) -> QuadFormMoments:
    """Moments of s^2 = (1/(N-1)) sum_n |y^n - E[y]|^2 for N i.i.d. complex
    samples with the given per-sample second-order stats.

    mean = N (var_re + var_im) / (N-1)
    var  = 2 N (var_re^2 + var_im^2 + 2 cov^2) / (N-1)^2
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    mu, var = _quadform_mean_var(stats.var_re, stats.var_im, stats.cov, n)
    return QuadFormMoments(float(mu), float(var))


def _quadform_mean_var(var_re, var_im, cov, n):
    # array-friendly core shared with the vectorized BEP evaluators
    mu = n * (var_re + var_im) / (n - 1)
    var = 2.0 * n * (var_re**2 + var_im**2 + 2.0 * cov**2) / (n - 1) ** 2
    return mu, var


def equal_error_threshold(m0: QuadFormMoments, m1: QuadFormMoments) -> float:
    """Decision threshold that equalizes the two conditional error rates of
    a Gaussian-vs-Gaussian variance test."""
    return float(
        _equal_error_threshold(
            m0.mean, math.sqrt(m0.var), m1.mean, math.sqrt(m1.var)
        )
    )


def threshold_bep(m0: QuadFormMoments, m1: QuadFormMoments) -> float:
    """Error probability of the equal-error-threshold variance test."""
    return float(
        _threshold_bep(m0.mean, math.sqrt(m0.var), m1.mean, math.sqrt(m1.var))
    )


def _equal_error_threshold(mu0, sd0, mu1, sd1):
    return (sd0 * mu1 + sd1 * mu0) / (sd0 + sd1)


def _threshold_bep(mu0, sd0, mu1, sd1):
    return q_function((mu1 - mu0) / (sd0 + sd1))


# ---------------------------------------------------------------------------
# exact law of the variance statistic
#
# For N i.i.d. complex samples whose (re, im) pair has 2x2 covariance C, the
# sample variance is distributed exactly as (a1 U + a2 V)/(N-1) with
# U, V ~ independent chi2_{N-1} and (a1, a2) the eigenvalues of C. This
# gives the variance detector's error rates without the Gaussian (CLT)
# approximation.
# ---------------------------------------------------------------------------

_GX2_NODES, _GX2_WEIGHTS = np.polynomial.legendre.leggauss(48)


def _cov_eigenvalues(var_re, var_im, cov):
    tr = var_re + var_im
    disc = np.sqrt(np.maximum((var_re - var_im) ** 2 + 4.0 * cov**2, 0.0))
    return 0.5 * (tr + disc), 0.5 * (tr - disc)


def gx2_sf(g, a1, a2, m):
    """P(a1*U + a2*V > g) for independent U, V ~ chi-square with m dof.

    Gauss-Legendre quadrature over the smaller-coefficient variable, so the
    conditional tail term stays smooth on the node grid; absolute accuracy
    ~1e-12 for m >= 2. Vectorized over g, a1, a2.
    """
    g = np.asarray(g, dtype=np.float64)
    scalar = g.ndim == 0
    g = np.atleast_1d(g)
    big = np.maximum(a1, a2)
    small = np.minimum(a1, a2)
    half_m = 0.5 * m
    span = 13.0 * math.sqrt(2.0 * m)
    lo = max(0.0, m - span)
    hi = m + span
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    v = mid + half * _GX2_NODES
    with np.errstate(divide="ignore"):
        log_pdf = ((half_m - 1.0) * np.log(v) - 0.5 * v
                   - gammaln(half_m) - half_m * math.log(2.0))
    pdf = np.where(v > 0.0, np.exp(log_pdf), 0.0)
    arg = (g[..., None] - np.asarray(small)[..., None] * v) / np.asarray(big)[..., None]
    sf = gammaincc(half_m, 0.5 * np.maximum(arg, 0.0))
    out = (pdf * sf) @ _GX2_WEIGHTS * half
    return float(out[0]) if scalar else out


def exact_variance_test_bep(var_re0, var_im0, cov0, var_re1, var_im1, cov1, n):
    """Exact error probability of the variance-threshold detector.

    The threshold is the equal-error point of the Gaussian-moment route
    (exactly what the detector applies); the error rates under it are then
    evaluated with the exact sample-variance law. Array inputs broadcast.
    """
    mu0, v0 = _quadform_mean_var(var_re0, var_im0, cov0, n)
    mu1, v1 = _quadform_mean_var(var_re1, var_im1, cov1, n)
    gamma = _equal_error_threshold(mu0, np.sqrt(v0), mu1, np.sqrt(v1))
    m = n - 1
    g = gamma * m
    a1_0, a2_0 = _cov_eigenvalues(var_re0, var_im0, cov0)
    a1_1, a2_1 = _cov_eigenvalues(var_re1, var_im1, cov1)
    return 0.5 * gx2_sf(g, a1_0, a2_0, m) + 0.5 * (1.0 - gx2_sf(g, a1_1, a2_1, m))
