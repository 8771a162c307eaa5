"""Quick self-contained invariant suite backing `ndnoma validate`.

Reduced-scale versions of the estimator-validity checks; the full-scale
versions live in the acceptance test suite.
"""

from __future__ import annotations

import math

import numpy as np

from . import theory
from .channel import FadingModel, draw_channel_components
from .core_stats import (
    SecondOrderStats,
    equal_error_threshold,
    q_function,
    quadform_moments,
    stream,
)
from .uplink import (
    UplinkObservation,
    derive_uplink_params,
    detect_u1_uplink,
    second_order_stats_uplink,
)


def _check_q_function(seed):
    # past |x| ~ 6.5 the value saturates at the double-precision spacing
    # around 1, so strict monotonicity is checked where it is representable
    xs = np.linspace(-6.0, 6.0, 1201)
    q = q_function(xs)
    monotone = bool(np.all(np.diff(q) < 0))
    symmetric = bool(np.max(np.abs(q + q_function(-xs) - 1.0)) < 1e-12)
    half = abs(float(q_function(0.0)) - 0.5) < 1e-15
    return monotone and symmetric and half, "monotone, Q(x)+Q(-x)=1, Q(0)=1/2"


def _check_channel_unit_gain(seed):
    rng = stream(seed, 1)
    draws = 100_000
    ok = True
    for k_db in (0.0, 5.0, 10.0):
        model = FadingModel.from_k_db(k_db)
        re, im = draw_channel_components(model, draws, rng)
        gain = re**2 + im**2
        se = gain.std(ddof=1) / math.sqrt(draws)
        ok &= abs(gain.mean() - 1.0) < 3.0 * se
        ok &= abs(np.corrcoef(re, im)[0, 1]) < 0.01
    return ok, "E[|h|^2]=1 within 3 standard errors; components uncorrelated"


def _check_quadform_moments(seed):
    rng = stream(seed, 2)
    stats = SecondOrderStats(0.3, 0.7, 0.2)
    n, frames = 50, 100_000
    cov = np.array([[stats.var_re, stats.cov], [stats.cov, stats.var_im]])
    chol = np.linalg.cholesky(cov)
    z = rng.standard_normal((frames, n, 2)) @ chol.T
    s2 = (z[:, :, 0] ** 2 + z[:, :, 1] ** 2).sum(axis=1) / (n - 1)
    m = quadform_moments(stats, n)
    se_mean = s2.std(ddof=1) / math.sqrt(frames)
    ok = abs(s2.mean() - m.mean) < 3.0 * se_mean
    # variance-of-variance standard error via fourth-moment estimate
    dev = (s2 - s2.mean()) ** 2
    se_var = dev.std(ddof=1) / math.sqrt(frames)
    ok &= abs(s2.var(ddof=1) - m.var) < 3.0 * se_var
    return ok, "quadratic-form moments match 1e5 simulated frames within 3 SE"


def _check_threshold_equalizes(seed):
    rng = stream(seed, 3)
    params = derive_uplink_params(1.0, 0.01, 10.0, 1.0, 100)
    worst = 0.0
    for _ in range(200):
        h1 = complex(*rng.standard_normal(2))
        h2 = complex(*rng.standard_normal(2))
        m0 = quadform_moments(
            second_order_stats_uplink(h1, h2, params.sigma2_low_sq, params), 100)
        m1 = quadform_moments(
            second_order_stats_uplink(h1, h2, params.sigma2_high_sq, params), 100)
        gamma = equal_error_threshold(m0, m1)
        z0 = (gamma - m0.mean) / math.sqrt(m0.var)
        z1 = (m1.mean - gamma) / math.sqrt(m1.var)
        worst = max(worst, abs(z0 - z1) / max(abs(z0), 1e-30))
    return worst < 1e-12, f"equal-error threshold balances both tails (worst {worst:.2e})"


def _check_integrator(seed):
    model = FadingModel(0.0)
    est = theory.unconditional_bep(lambda h: np.full(h.shape, 0.25),
                                   model, 1, 10_000, stream(seed, 4))
    ok = est.value == 0.25 and est.std_error == 0.0
    est_j = theory.unconditional_bep(lambda h: np.abs(h) ** 2 / (4.0 + np.abs(h) ** 2),
                                     model, 1, 20_000, stream(seed, 5))
    est_4j = theory.unconditional_bep(lambda h: np.abs(h) ** 2 / (4.0 + np.abs(h) ** 2),
                                      model, 1, 80_000, stream(seed, 6))
    ratio = est_4j.std_error / est_j.std_error
    ok &= abs(ratio - 0.5) < 0.1
    return ok, f"constant integrand exact; SE(4J)/SE(J)={ratio:.3f} vs 0.5"


def _check_u1_scale_invariance(seed):
    rng = stream(seed, 7)
    params = derive_uplink_params(1.0, 0.01, 10.0, 1.0, 50)
    ok = True
    for _ in range(200):
        frame = rng.standard_normal(50) + 1j * rng.standard_normal(50)
        h1 = complex(*rng.standard_normal(2))
        h2 = complex(*rng.standard_normal(2))
        obs = UplinkObservation(frame=frame, h1=h1, h2=h2)
        scaled = UplinkObservation(frame=frame * 17.3, h1=h1, h2=h2)
        ok &= detect_u1_uplink(obs, params) == detect_u1_uplink(scaled, params)
    return ok, "mean detector invariant to positive frame scaling"


_CHECKS = (
    ("q-function", _check_q_function),
    ("channel-unit-gain", _check_channel_unit_gain),
    ("quadform-moments", _check_quadform_moments),
    ("threshold-equal-error", _check_threshold_equalizes),
    ("mc-integrator", _check_integrator),
    ("u1-scale-invariance", _check_u1_scale_invariance),
)


def run_all(seed: int) -> int:
    failures = 0
    for name, fn in _CHECKS:
        ok, detail = fn(seed)
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        failures += 0 if ok else 1
    return 0 if failures == 0 else 1
