"""Benchmark schemes: OMA-NoiseMod and downlink PD-NOMA with SIC.

OMA-NoiseMod splits the N-sample bit slot into two interference-free halves
and runs classic variance-keyed NoiseMod per user, so both users face
statistically identical conditions. PD-NOMA superposes two antipodal
symbols with an asymmetric power split; the far user decodes through the
interference, the near user runs genuine SIC (re-modulate, subtract,
decode), so its errors propagate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .channel import FadingModel
from .core_stats import _quadform_mean_var, _threshold_bep, exact_variance_test_bep
from .downlink import derive_downlink_params_from_noise
from .uplink import UplinkParams


@dataclass(frozen=True)
class PdNomaParams:
    """PD-NOMA operating point: average SNR and far-user power fraction."""

    gamma_bar: float
    rho_far: float
    p_total: float = 1.0
    n_symbols_per_point: int = 100_000

    def __post_init__(self):
        if self.gamma_bar <= 0:
            raise ValueError(f"gamma_bar must be > 0, got {self.gamma_bar}")
        if not 0.5 < self.rho_far < 1.0:
            raise ValueError(f"rho_far must be in (0.5,1), got {self.rho_far}")

    @property
    def sigma_w_sq(self) -> float:
        return 1.0 / self.gamma_bar


def noisemod_cond_bep(h, sig_l_sq, sig_h_sq, sigma_w_sq, n_sub):
    """Conditional BEP of a single variance-keyed NoiseMod link over n_sub
    samples (CLT route with the equal-error threshold). Scalar or array h."""
    h = np.asarray(h, dtype=np.complex128)
    swh = sigma_w_sq / 2.0
    mu0, v0 = _quadform_mean_var(h.real**2 * sig_l_sq + swh,
                                 h.imag**2 * sig_l_sq + swh,
                                 h.real * h.imag * sig_l_sq, n_sub)
    mu1, v1 = _quadform_mean_var(h.real**2 * sig_h_sq + swh,
                                 h.imag**2 * sig_h_sq + swh,
                                 h.real * h.imag * sig_h_sq, n_sub)
    out = _threshold_bep(mu0, np.sqrt(v0), mu1, np.sqrt(v1))
    return float(out) if out.ndim == 0 else out


def exact_noisemod_cond_bep(h, sig_l_sq, sig_h_sq, sigma_w_sq, n_sub):
    """Exact error probability of the NoiseMod variance detector given h."""
    h = np.asarray(h, dtype=np.complex128)
    swh = sigma_w_sq / 2.0

    def stats(sig_sq):
        return (h.real**2 * sig_sq + swh, h.imag**2 * sig_sq + swh,
                h.real * h.imag * sig_sq)

    out = exact_variance_test_bep(*stats(sig_l_sq), *stats(sig_h_sq), n_sub)
    return out if np.ndim(out) else float(out)


def oma_noisemod_ber(params: UplinkParams, fading: FadingModel, trials: int,
                     rng, rng_u2=None):
    """Per-user BER of OMA-NoiseMod: each user alone on N/2 samples with the
    same power budget and variance ratio as the ND-NOMA U2 waveform.

    rng drives user 1; rng_u2 (an independent stream, defaulting to a split
    of rng) drives user 2, so the two links see i.i.d. identical conditions.
    """
    if params.n_samples % 2 != 0:
        raise ValueError(f"N must be even for the N/2 split, got {params.n_samples}")
    n_sub = params.n_samples // 2
    if rng_u2 is None:
        rng_u2 = np.random.default_rng(rng.spawn(1)[0])
    err1 = kernels.noisemod_block_errors(
        params.sigma2_low_sq, params.sigma2_high_sq, params.sigma_w_sq,
        n_sub, fading, trials, rng)
    err2 = kernels.noisemod_block_errors(
        params.sigma2_low_sq, params.sigma2_high_sq, params.sigma_w_sq,
        n_sub, fading, trials, rng_u2)
    return err1 / trials, err2 / trials


def pd_noma_downlink_ber(params: PdNomaParams, fading: FadingModel,
                         trials: int, rng):
    """Empirical (ber_near, ber_far, ber_avg) for the PD-NOMA baseline."""
    err_near, err_far = kernels.pdnoma_block_errors(
        params.rho_far, params.p_total, params.sigma_w_sq, fading, trials, rng)
    ber_near = err_near / trials
    ber_far = err_far / trials
    return ber_near, ber_far, 0.5 * (ber_near + ber_far)


@dataclass(frozen=True)
class ComparisonPoint:
    """Paired ND-NOMA / PD-NOMA BERs at one shared gamma_bar."""

    gamma_bar: float
    sigma_w_sq: float
    delta: float
    ber_nd_u1: float
    ber_nd_u2: float
    ber_nd_avg: float
    ber_pd_near: float
    ber_pd_far: float
    ber_pd_avg: float


def nd_noma_vs_pd_noma_point(gamma_bar, trials, rng_nd, rng_pd,
                             rho_far=0.8, n_samples=150, psi=0.5,
                             alpha=10.0, p_total=1.0,
                             fading: FadingModel | None = None) -> ComparisonPoint:
    """Evaluate downlink ND-NOMA and PD-NOMA at the same total power and the
    exact same noise power sigma_w^2 = 1/gamma_bar.

    The ND-NOMA variance-domain operating point follows from holding its
    power split fixed: delta = sigma2_low_sq * gamma_bar.
    """
    if fading is None:
        fading = FadingModel(0.0)
    sigma_w_sq = 1.0 / gamma_bar
    nd = derive_downlink_params_from_noise(p_total, psi, alpha, sigma_w_sq,
                                           n_samples)
    e1, e2, _ = kernels.downlink_block_errors(nd, fading, trials, rng_nd)
    pd = PdNomaParams(gamma_bar=gamma_bar, rho_far=rho_far, p_total=p_total,
                      n_symbols_per_point=trials)
    ber_near, ber_far, ber_avg = pd_noma_downlink_ber(pd, fading, trials, rng_pd)
    return ComparisonPoint(
        gamma_bar=gamma_bar,
        sigma_w_sq=sigma_w_sq,
        delta=nd.delta,
        ber_nd_u1=e1 / trials,
        ber_nd_u2=e2 / trials,
        ber_nd_avg=0.5 * (e1 + e2) / trials,
        ber_pd_near=ber_near,
        ber_pd_far=ber_far,
        ber_pd_avg=ber_avg,
    )
