"""Uplink ND-NOMA: two transmitters superimposed at the base station.

U1 keys the mean of its real Gaussian samples (+m1 / -m1), U2 keys the
variance (low / high). The BS sees y^n = h1 s1^n + h2 s2^n + w^n and runs a
minimum-distance mean detector for U1 and an equal-error variance-threshold
detector for U2. Conditional bit error probabilities for both detectors are
evaluated in closed form given the channel pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core_stats import (
    SecondOrderStats,
    _equal_error_threshold,
    _quadform_mean_var,
    _threshold_bep,
    draw_complex_noise,
    exact_variance_test_bep,
    q_function,
    quadform_moments,
)

ETA_CONSISTENCY_RTOL = 1e-12


@dataclass(frozen=True)
class UplinkParams:
    """One uplink operating point: inputs and all derived constants.

    p_total is the per-user average sample power P. U1 spends beta*P on
    sample variance and (1-beta)*P on the keying mean; U2 splits P across
    its low/high variances with ratio alpha. delta = sigma2_low_sq/sigma_w_sq
    fixes the receiver noise power.
    """

    p_total: float
    beta: float
    alpha: float
    delta: float
    n_samples: int
    m1_low: float
    m1_high: float
    sigma1_sq: float
    sigma2_low_sq: float
    sigma2_high_sq: float
    sigma_w_sq: float
    eta: float
    m2: float = 0.0


def derive_uplink_params(p_total, beta, alpha, delta, n_samples) -> UplinkParams:
    """Validate inputs and solve the power-accounting identities."""
    if p_total <= 0:
        raise ValueError(f"p_total must be > 0, got {p_total}")
    if not 0 < beta < 1:
        raise ValueError(f"beta must be in (0,1), got {beta}")
    if alpha <= 1:
        raise ValueError(f"alpha must be > 1, got {alpha}")
    if delta <= 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples}")

    sigma1_sq = beta * p_total
    m1_low = math.sqrt((1.0 - beta) * p_total)
    sigma2_low_sq = 2.0 * p_total / (1.0 + alpha)
    sigma2_high_sq = alpha * sigma2_low_sq
    sigma_w_sq = sigma2_low_sq / delta
    eta = sigma1_sq / sigma_w_sq
    eta_closed_form = (1.0 + alpha) * delta * beta / 2.0
    if abs(eta - eta_closed_form) > ETA_CONSISTENCY_RTOL * eta_closed_form:
        raise RuntimeError(
            f"eta consistency violated: {eta} vs {eta_closed_form}"
        )
    return UplinkParams(
        p_total=p_total,
        beta=beta,
        alpha=alpha,
        delta=delta,
        n_samples=int(n_samples),
        m1_low=m1_low,
        m1_high=-m1_low,
        sigma1_sq=sigma1_sq,
        sigma2_low_sq=sigma2_low_sq,
        sigma2_high_sq=sigma2_high_sq,
        sigma_w_sq=sigma_w_sq,
        eta=eta,
    )


@dataclass(frozen=True)
class UplinkObservation:
    """One received frame and the channel pair it saw."""

    frame: np.ndarray  # complex, length N
    h1: complex
    h2: complex


def tx_u1(bit, params: UplinkParams, rng) -> np.ndarray:
    """U1 frame: N real draws with mean +m1 (bit 0) or -m1 (bit 1)."""
    mean = params.m1_low if bit == 0 else params.m1_high
    sd = math.sqrt(params.sigma1_sq)
    return mean + sd * rng.standard_normal(params.n_samples)


def tx_u2(bit, params: UplinkParams, rng) -> np.ndarray:
    """U2 frame: N zero-mean real draws with low (bit 0) or high variance."""
    var = params.sigma2_low_sq if bit == 0 else params.sigma2_high_sq
    return math.sqrt(var) * rng.standard_normal(params.n_samples)


def combine_uplink(s1, s2, h1, h2, sigma_w_sq, rng) -> UplinkObservation:
    """Superimpose both users through their channels and add CN noise."""
    s1 = np.asarray(s1, dtype=np.float64)
    s2 = np.asarray(s2, dtype=np.float64)
    if s1.shape != s2.shape:
        raise ValueError(f"frame length mismatch: {s1.shape} vs {s2.shape}")
    w = draw_complex_noise(sigma_w_sq, s1.size, rng)
    return UplinkObservation(frame=h1 * s1 + h2 * s2 + w, h1=h1, h2=h2)


def detect_u1_uplink(obs: UplinkObservation, params: UplinkParams) -> int:
    """Minimum-distance mean detector; ties resolve to bit 0.

    With m1_high = -m1_low the distance rule reduces to the sign of
    Re{ybar * conj(h1)} (m1_low > 0 by construction).
    """
    ybar = obs.frame.mean()
    stat = ybar.real * obs.h1.real + ybar.imag * obs.h1.imag
    return 0 if stat >= 0.0 else 1


def second_order_stats_uplink(h1, h2, sigma2k_sq, params: UplinkParams) -> SecondOrderStats:
    """Per-sample (var_re, var_im, cov) of y^n for a fixed U2 variance state."""
    var_re = h1.real**2 * params.sigma1_sq + h2.real**2 * sigma2k_sq + params.sigma_w_sq / 2.0
    var_im = h1.imag**2 * params.sigma1_sq + h2.imag**2 * sigma2k_sq + params.sigma_w_sq / 2.0
    cov = h1.real * h1.imag * params.sigma1_sq + h2.real * h2.imag * sigma2k_sq
    return SecondOrderStats(var_re, var_im, cov)


def u2_threshold(h1, h2, params: UplinkParams) -> float:
    """Channel-aware variance threshold equalizing the two error rates."""
    m0 = quadform_moments(
        second_order_stats_uplink(h1, h2, params.sigma2_low_sq, params), params.n_samples
    )
    m1 = quadform_moments(
        second_order_stats_uplink(h1, h2, params.sigma2_high_sq, params), params.n_samples
    )
    return float(
        _equal_error_threshold(m0.mean, math.sqrt(m0.var), m1.mean, math.sqrt(m1.var))
    )


def static_chi(params: UplinkParams) -> float:
    """Scaled static threshold constant for gamma = chi * sigma_w_sq."""
    d, a = params.delta, params.alpha
    return 2.0 * (1.0 + d) * (1.0 + a * d) / (2.0 + d * (1.0 + a))


def detect_u2_uplink(obs: UplinkObservation, params: UplinkParams,
                     threshold_mode: str = "clt") -> int:
    """Variance-threshold detector; ties resolve to bit 0.

    threshold_mode "clt" uses the channel-aware equal-error threshold
    (needs h1, h2 at the BS); "static" uses gamma = chi * sigma_w_sq.
    """
    frame = obs.frame
    centered = frame - frame.mean()
    s_y2 = np.sum(centered.real**2 + centered.imag**2) / (frame.size - 1)
    if threshold_mode == "clt":
        gamma = u2_threshold(obs.h1, obs.h2, params)
    elif threshold_mode == "static":
        gamma = static_chi(params) * params.sigma_w_sq
    else:
        raise ValueError(f"unknown threshold_mode {threshold_mode!r}")
    return 1 if s_y2 > gamma else 0


def cond_bep_u1_uplink(h1, h2, params: UplinkParams):
    """U1 bit error probability conditioned on the channel pair.

    Exact: the decision statistic is Gaussian given (h1, h2) and the U2
    variance state; the two equiprobable U2 states are averaged. Accepts
    scalar or array channel inputs (broadcast elementwise).
    """
    h1 = np.asarray(h1, dtype=np.complex128)
    h2 = np.asarray(h2, dtype=np.complex128)
    m_d = (h1.real**2 + h1.imag**2) * params.m1_low**2
    total = 0.0
    for sig2k_sq in (params.sigma2_low_sq, params.sigma2_high_sq):
        sigma_d_sq = _u1_stat_var(h1, h2, sig2k_sq, params.sigma1_sq,
                                  params.sigma_w_sq, params.m1_low, params.n_samples)
        if np.any(sigma_d_sq < 0.0):
            raise RuntimeError("negative decision-statistic variance")
        # sigma_d_sq == 0 only when h1 == 0, where m_d == 0 too: no signal,
        # error probability 1/2
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(sigma_d_sq > 0.0, m_d / np.sqrt(sigma_d_sq), 0.0)
        total = total + q_function(ratio)
    out = 0.5 * total
    return float(out) if out.ndim == 0 else out


def _u1_stat_var(h1, h2, sig2k_sq, sigma1_sq, sigma_w_sq, m1_low, n):
    # VAR of Re{ybar conj(h1)} m1 for one U2 variance state
    var_yr = (h1.real**2 * sigma1_sq + h2.real**2 * sig2k_sq + sigma_w_sq / 2.0) / n
    var_yi = (h1.imag**2 * sigma1_sq + h2.imag**2 * sig2k_sq + sigma_w_sq / 2.0) / n
    cov = (h1.real * h1.imag * sigma1_sq + h2.real * h2.imag * sig2k_sq) / n
    return m1_low**2 * (
        h1.real**2 * var_yr + h1.imag**2 * var_yi + 2.0 * h1.real * h1.imag * cov
    )


def cond_bep_u2_uplink(h1, h2, params: UplinkParams):
    """U2 bit error probability conditioned on the channel pair.

    Gaussian (CLT) approximation of the sample-variance statistic with the
    equal-error threshold; no averaging over U1's bit is needed since the
    mean does not enter the second-order stats. Accepts scalars or arrays.
    """
    h1 = np.asarray(h1, dtype=np.complex128)
    h2 = np.asarray(h2, dtype=np.complex128)
    mu0, sd0 = _u2_moments(h1, h2, params.sigma2_low_sq, params)
    mu1, sd1 = _u2_moments(h1, h2, params.sigma2_high_sq, params)
    out = _threshold_bep(mu0, sd0, mu1, sd1)
    return float(out) if out.ndim == 0 else out


def _u2_moments(h1, h2, sig2k_sq, params):
    var_re = h1.real**2 * params.sigma1_sq + h2.real**2 * sig2k_sq + params.sigma_w_sq / 2.0
    var_im = h1.imag**2 * params.sigma1_sq + h2.imag**2 * sig2k_sq + params.sigma_w_sq / 2.0
    cov = h1.real * h1.imag * params.sigma1_sq + h2.real * h2.imag * sig2k_sq
    mu, var = _quadform_mean_var(var_re, var_im, cov, params.n_samples)
    return mu, np.sqrt(var)


def exact_cond_bep_u2_uplink(h1, h2, params: UplinkParams):
    """Exact U2 error probability of the implemented detector given the
    channels: same equal-error threshold, but the sample-variance statistic
    evaluated with its exact generalized chi-square law instead of the
    Gaussian approximation. Accepts scalars or arrays."""
    h1 = np.asarray(h1, dtype=np.complex128)
    h2 = np.asarray(h2, dtype=np.complex128)

    def stats(sig2k_sq):
        swh = params.sigma_w_sq / 2.0
        return (h1.real**2 * params.sigma1_sq + h2.real**2 * sig2k_sq + swh,
                h1.imag**2 * params.sigma1_sq + h2.imag**2 * sig2k_sq + swh,
                h1.real * h1.imag * params.sigma1_sq + h2.real * h2.imag * sig2k_sq)

    out = exact_variance_test_bep(*stats(params.sigma2_low_sq),
                                  *stats(params.sigma2_high_sq),
                                  params.n_samples)
    return out if np.ndim(out) else float(out)
