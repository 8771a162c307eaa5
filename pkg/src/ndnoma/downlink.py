"""Downlink ND-NOMA: one composite BS waveform, two receivers.

The BS transmits N real Gaussian samples whose mean carries U1's bit and
whose variance carries U2's bit (four mean/variance combinations). Each
user receives the same waveform through its own channel and runs the same
detector family as the uplink, but without the other user's signal in its
statistics.
"""

from __future__ import annotations

import dataclasses
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

POWER_SPLIT_RTOL = 1e-12


@dataclass(frozen=True)
class DownlinkParams:
    """One downlink operating point.

    psi is the fraction of the BS power P placed on the keying mean
    (m1_low^2 = psi*P); the rest feeds the variance pair, which again uses
    ratio alpha. delta = sigma2_low_sq / sigma_w_sq as in the uplink.
    """

    p_total: float
    psi: float
    alpha: float
    delta: float
    n_samples: int
    m1_low: float
    m1_high: float
    sigma2_low_sq: float
    sigma2_high_sq: float
    sigma_w_sq: float


def derive_downlink_params(p_total, psi, alpha, delta, n_samples) -> DownlinkParams:
    """Validate inputs and solve the composite power split."""
    if p_total <= 0:
        raise ValueError(f"p_total must be > 0, got {p_total}")
    if not 0 < psi < 1:
        raise ValueError(f"psi must be in (0,1), got {psi}")
    if alpha <= 1:
        raise ValueError(f"alpha must be > 1, got {alpha}")
    if delta <= 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples}")

    m1_low = math.sqrt(psi * p_total)
    sigma2_low_sq = 2.0 * (1.0 - psi) * p_total / (1.0 + alpha)
    sigma2_high_sq = alpha * sigma2_low_sq
    split = m1_low**2 + 0.5 * (sigma2_low_sq + sigma2_high_sq)
    if abs(split - p_total) > POWER_SPLIT_RTOL * p_total:
        raise RuntimeError(f"power split violated: {split} vs {p_total}")
    return DownlinkParams(
        p_total=p_total,
        psi=psi,
        alpha=alpha,
        delta=delta,
        n_samples=int(n_samples),
        m1_low=m1_low,
        m1_high=-m1_low,
        sigma2_low_sq=sigma2_low_sq,
        sigma2_high_sq=sigma2_high_sq,
        sigma_w_sq=sigma2_low_sq / delta,
    )


def derive_downlink_params_from_noise(p_total, psi, alpha, sigma_w_sq,
                                      n_samples) -> DownlinkParams:
    """Variant keyed on noise power instead of delta, so sigma_w_sq is held
    exactly (used by the equal-noise PD-NOMA comparison)."""
    if sigma_w_sq <= 0:
        raise ValueError(f"sigma_w_sq must be > 0, got {sigma_w_sq}")
    sigma2_low_sq = 2.0 * (1.0 - psi) * p_total / (1.0 + alpha)
    base = derive_downlink_params(
        p_total, psi, alpha, sigma2_low_sq / sigma_w_sq, n_samples
    )
    # replace the derived noise power with the exact requested value
    return dataclasses.replace(base, sigma_w_sq=float(sigma_w_sq))


def tx_bs(bit1, bit2, params: DownlinkParams, rng) -> np.ndarray:
    """Composite BS frame: N(m_{1,i}, sigma_{2,k}^2) with i from bit1, k
    from bit2."""
    mean = params.m1_low if bit1 == 0 else params.m1_high
    var = params.sigma2_low_sq if bit2 == 0 else params.sigma2_high_sq
    return mean + math.sqrt(var) * rng.standard_normal(params.n_samples)


def rx_user(s_bs, h, sigma_w_sq, rng) -> np.ndarray:
    """One user's received frame: h * s + CN(0, sigma_w_sq) noise."""
    s_bs = np.asarray(s_bs, dtype=np.float64)
    return h * s_bs + draw_complex_noise(sigma_w_sq, s_bs.size, rng)


def detect_u1_downlink(frame, h1, params: DownlinkParams) -> int:
    """Minimum-distance mean detector on y1; ties resolve to bit 0."""
    ybar = np.asarray(frame).mean()
    stat = ybar.real * h1.real + ybar.imag * h1.imag
    return 0 if stat >= 0.0 else 1


def second_order_stats_downlink(h2, sigma2k_sq, params: DownlinkParams) -> SecondOrderStats:
    """Per-sample (var_re, var_im, cov) of y2^n for one variance state."""
    var_re = h2.real**2 * sigma2k_sq + params.sigma_w_sq / 2.0
    var_im = h2.imag**2 * sigma2k_sq + params.sigma_w_sq / 2.0
    cov = h2.real * h2.imag * sigma2k_sq
    return SecondOrderStats(var_re, var_im, cov)


def u2_threshold(h2, params: DownlinkParams) -> float:
    """Channel-aware equal-error variance threshold for user 2."""
    m0 = quadform_moments(
        second_order_stats_downlink(h2, params.sigma2_low_sq, params), params.n_samples
    )
    m1 = quadform_moments(
        second_order_stats_downlink(h2, params.sigma2_high_sq, params), params.n_samples
    )
    return float(
        _equal_error_threshold(m0.mean, math.sqrt(m0.var), m1.mean, math.sqrt(m1.var))
    )


def static_chi(params: DownlinkParams) -> float:
    d, a = params.delta, params.alpha
    return 2.0 * (1.0 + d) * (1.0 + a * d) / (2.0 + d * (1.0 + a))


def detect_u2_downlink(frame, h2, params: DownlinkParams,
                       threshold_mode: str = "clt") -> int:
    """Variance-threshold detector on y2; ties resolve to bit 0."""
    frame = np.asarray(frame)
    centered = frame - frame.mean()
    s_y2 = np.sum(centered.real**2 + centered.imag**2) / (frame.size - 1)
    if threshold_mode == "clt":
        gamma = u2_threshold(h2, params)
    elif threshold_mode == "static":
        gamma = static_chi(params) * params.sigma_w_sq
    else:
        raise ValueError(f"unknown threshold_mode {threshold_mode!r}")
    return 1 if s_y2 > gamma else 0


def cond_bep_u1_downlink(h1, params: DownlinkParams):
    """U1 bit error probability given h1, averaged over the two equiprobable
    composite variance states. Exact (no interference term). Accepts scalar
    or array channel input."""
    h1 = np.asarray(h1, dtype=np.complex128)
    m_d = (h1.real**2 + h1.imag**2) * params.m1_low**2
    total = 0.0
    for sig2k_sq in (params.sigma2_low_sq, params.sigma2_high_sq):
        sigma_d_sq = _u1_stat_var(h1, sig2k_sq, params.sigma_w_sq,
                                  params.m1_low, params.n_samples)
        if np.any(sigma_d_sq < 0.0):
            raise RuntimeError("negative decision-statistic variance")
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(sigma_d_sq > 0.0, m_d / np.sqrt(sigma_d_sq), 0.0)
        total = total + q_function(ratio)
    out = 0.5 * total
    return float(out) if out.ndim == 0 else out


def _u1_stat_var(h1, sig2k_sq, sigma_w_sq, m1_low, n):
    var_yr = (h1.real**2 * sig2k_sq + sigma_w_sq / 2.0) / n
    var_yi = (h1.imag**2 * sig2k_sq + sigma_w_sq / 2.0) / n
    cov = h1.real * h1.imag * sig2k_sq / n
    return m1_low**2 * (
        h1.real**2 * var_yr + h1.imag**2 * var_yi + 2.0 * h1.real * h1.imag * cov
    )


def cond_bep_u2_downlink(h2, params: DownlinkParams):
    """U2 bit error probability given h2, via the Gaussian (CLT)
    approximation with the equal-error threshold. Accepts scalar or array."""
    h2 = np.asarray(h2, dtype=np.complex128)
    mu0, sd0 = _u2_moments(h2, params.sigma2_low_sq, params)
    mu1, sd1 = _u2_moments(h2, params.sigma2_high_sq, params)
    out = _threshold_bep(mu0, sd0, mu1, sd1)
    return float(out) if out.ndim == 0 else out


def _u2_moments(h2, sig2k_sq, params):
    var_re = h2.real**2 * sig2k_sq + params.sigma_w_sq / 2.0
    var_im = h2.imag**2 * sig2k_sq + params.sigma_w_sq / 2.0
    cov = h2.real * h2.imag * sig2k_sq
    mu, var = _quadform_mean_var(var_re, var_im, cov, params.n_samples)
    return mu, np.sqrt(var)


def exact_cond_bep_u2_downlink(h2, params: DownlinkParams):
    """Exact U2 error probability of the implemented detector given h2
    (generalized chi-square law of the sample variance, same threshold)."""
    h2 = np.asarray(h2, dtype=np.complex128)

    def stats(sig2k_sq):
        swh = params.sigma_w_sq / 2.0
        return (h2.real**2 * sig2k_sq + swh,
                h2.imag**2 * sig2k_sq + swh,
                h2.real * h2.imag * sig2k_sq)

    out = exact_variance_test_bep(*stats(params.sigma2_low_sq),
                                  *stats(params.sigma2_high_sq),
                                  params.n_samples)
    return out if np.ndim(out) else float(out)
