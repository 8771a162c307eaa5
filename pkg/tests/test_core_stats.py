import math

import numpy as np
import pytest
from scipy.stats import chi2

from ndnoma.core_stats import (
    QuadFormMoments,
    SecondOrderStats,
    draw_real_gaussian,
    equal_error_threshold,
    exact_variance_test_bep,
    gx2_sf,
    q_function,
    quadform_moments,
    sample_mean,
    sample_variance,
    stream,
    threshold_bep,
)

# frozen from scipy.integrate.quad of the normal density on [1.2816, inf),
# quadrature error < 1e-10
Q_ORACLE_1_2816 = 0.0999915001


class TestQFunction:
    def test_half_at_zero(self):
        assert q_function(0.0) == pytest.approx(0.5, abs=1e-15)

    def test_tail_value_against_quadrature_oracle(self):
        assert q_function(1.2816) == pytest.approx(Q_ORACLE_1_2816, abs=1e-9)
        # coarse sanity: the decile tail point is 0.100 +- 0.001
        assert abs(q_function(1.2816) - 0.100) < 1e-3

    def test_deep_tail_underflows_monotonically(self):
        vals = q_function(np.array([35.0, 37.0, 40.0]))
        assert vals[0] < 1e-260
        assert vals[0] >= vals[1] >= vals[2] >= 0.0

    def test_symmetry_identity(self):
        x = np.linspace(-8, 8, 2001)
        assert np.max(np.abs(q_function(x) + q_function(-x) - 1.0)) < 1e-12

    def test_strictly_decreasing(self):
        # strictly decreasing wherever successive values are resolvable in
        # double precision (saturation at 1 begins past x ~ -6.5)
        x = np.linspace(-6, 6, 1201)
        assert np.all(np.diff(q_function(x)) < 0)


class TestDrawRealGaussian:
    def test_degenerate_variance_returns_mean(self):
        out = draw_real_gaussian(3.0, 0.0, 4, stream(1, 0))
        assert np.array_equal(out, np.full(4, 3.0))

    def test_mean_concentration(self):
        out = draw_real_gaussian(0.0, 1.0, 10**6, stream(1, 1))
        assert abs(out.mean()) < 0.004  # 4 sigma of the estimator

    def test_variance_concentration(self):
        out = draw_real_gaussian(2.5, 1.7, 10**6, stream(1, 2))
        assert out.var(ddof=1) == pytest.approx(1.7, rel=0.01)

    def test_rejects_negative_variance(self):
        with pytest.raises(ValueError):
            draw_real_gaussian(0.0, -1e-9, 10, stream(1, 3))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            draw_real_gaussian(0.0, 1.0, 0, stream(1, 4))


class TestSampleMoments:
    def test_mean_constant_frame(self):
        assert sample_mean([1 + 0j, 1 + 0j]) == 1 + 0j

    def test_mean_symmetric_pair(self):
        assert sample_mean([1 + 1j, -1 - 1j]) == 0j

    def test_mean_hand_arithmetic(self):
        assert sample_mean([2 + 0j, 0 + 2j, 4 + 4j]) == 2 + 2j

    def test_mean_rejects_empty(self):
        with pytest.raises(ValueError):
            sample_mean([])

    def test_variance_constant_frame_is_zero(self):
        # dyadic constant: the mean is exact, so the variance is exactly 0
        assert sample_variance(np.full(64, 0.25 - 0.5j)) == 0.0
        # non-dyadic constants leave only summation rounding (~1e-32)
        assert sample_variance(np.full(64, 0.3 - 0.7j)) < 1e-30

    def test_variance_antipodal_pair(self):
        assert sample_variance([1 + 0j, -1 + 0j]) == pytest.approx(2.0, abs=1e-15)

    def test_variance_concentration(self):
        rng = stream(2, 0)
        sigma_sq = 0.8
        sd = math.sqrt(sigma_sq / 2)
        frame = sd * rng.standard_normal(10**6) + 1j * sd * rng.standard_normal(10**6)
        assert sample_variance(frame) == pytest.approx(sigma_sq, rel=0.01)

    def test_variance_rejects_short_frame(self):
        with pytest.raises(ValueError):
            sample_variance([1 + 0j])

    def test_variance_nonnegative_and_zero_iff_constant(self):
        rng = stream(2, 1)
        for _ in range(50):
            frame = rng.standard_normal(16) + 1j * rng.standard_normal(16)
            assert sample_variance(frame) > 0.0

    def test_sum_stability_of_variances(self):
        # sum of independent Gaussian frames: variances add
        rng = stream(2, 2)
        x = 0.9 * rng.standard_normal(10**6)
        y = 1.4 * rng.standard_normal(10**6)
        total = sample_variance((x + y).astype(complex))
        assert total == pytest.approx(0.9**2 + 1.4**2, rel=0.01)


class TestQuadFormMoments:
    def test_direct_evaluation(self):
        m = quadform_moments(SecondOrderStats(0.5, 0.5, 0.0), 100)
        assert m.mean == pytest.approx(100 / 99, rel=1e-12)
        assert m.var == pytest.approx(100 / 9801, rel=1e-12)

    def test_large_n_mean_limit(self):
        v = 0.37
        m = quadform_moments(SecondOrderStats(v, v, 0.0), 10**7)
        assert m.mean == pytest.approx(2 * v, rel=1e-6)

    def test_matches_simulated_frames(self):
        # frames of the mean-centered quadratic form the moments describe
        stats = SecondOrderStats(0.3, 0.7, 0.2)
        n, frames = 50, 10**6
        chol = np.linalg.cholesky([[stats.var_re, stats.cov],
                                   [stats.cov, stats.var_im]])
        rng = stream(3, 0)
        s2 = np.empty(frames)
        block = 100_000
        for i in range(frames // block):
            z = rng.standard_normal((block, n, 2)) @ chol.T
            s2[i * block:(i + 1) * block] = (z**2).sum(axis=(1, 2)) / (n - 1)
        m = quadform_moments(stats, n)
        assert s2.mean() == pytest.approx(m.mean, rel=0.01)
        assert s2.var(ddof=1) == pytest.approx(m.var, rel=0.01)
        # the actual sample variance relates by (n-1)/n: document the bias
        assert m.mean * (n - 1) / n == pytest.approx(stats.var_re + stats.var_im,
                                                     rel=1e-12)

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            quadform_moments(SecondOrderStats(1.0, 1.0, 0.0), 1)

    def test_invalid_covariance_rejected(self):
        with pytest.raises(ValueError):
            SecondOrderStats(1.0, 1.0, 1.1)
        with pytest.raises(ValueError):
            SecondOrderStats(-0.1, 1.0, 0.0)
        with pytest.raises(ValueError):
            QuadFormMoments(1.0, -1e-9)


class TestThreshold:
    def test_equal_error_identity(self):
        # threshold balances both tails to machine precision
        rng = stream(4, 0)
        worst = 0.0
        for _ in range(300):
            m0 = QuadFormMoments(1.0 + rng.random(), 0.01 + rng.random())
            m1 = QuadFormMoments(m0.mean * (1.2 + rng.random()), 0.01 + rng.random())
            gamma = equal_error_threshold(m0, m1)
            z0 = (gamma - m0.mean) / math.sqrt(m0.var)
            z1 = (m1.mean - gamma) / math.sqrt(m1.var)
            worst = max(worst, abs(z0 - z1) / abs(z0))
        assert worst < 1e-12

    def test_degenerate_equal_sigmas_is_midpoint(self):
        m0 = QuadFormMoments(1.0, 0.04)
        m1 = QuadFormMoments(3.0, 0.04)
        assert equal_error_threshold(m0, m1) == pytest.approx(2.0, rel=1e-12)

    def test_bep_equals_balanced_tail(self):
        m0 = QuadFormMoments(1.0, 0.04)
        m1 = QuadFormMoments(1.5, 0.09)
        bep = threshold_bep(m0, m1)
        assert bep == pytest.approx(float(q_function(0.5 / (0.2 + 0.3))), rel=1e-12)


class TestGeneralizedChiSquare:
    def test_equal_coefficients_closed_form(self):
        for m in (24, 49, 99, 149):
            a = 0.7
            g = np.array([0.5, 1.0, 1.5]) * a * 2 * m
            got = gx2_sf(g, a, a, m)
            want = chi2.sf(g / a, 2 * m)
            assert np.allclose(got, want, rtol=1e-7)

    def test_monte_carlo_cross_check(self):
        rng = stream(5, 0)
        m = 49
        for a1, a2, gmul in ((1.0, 0.3, 1.2), (2.0, 0.01, 0.9), (1.0, 0.001, 1.5)):
            u = rng.chisquare(m, 2 * 10**6)
            v = rng.chisquare(m, 2 * 10**6)
            g = gmul * (a1 + a2) * m
            mc = np.mean(a1 * u + a2 * v > g)
            se = math.sqrt(mc * (1 - mc) / (2 * 10**6))
            assert gx2_sf(g, a1, a2, m) == pytest.approx(mc, abs=4 * se)

    def test_exact_bep_degenerate_hypotheses(self):
        # identical hypotheses: any threshold splits errors to exactly 1/2
        out = exact_variance_test_bep(0.4, 0.6, 0.1, 0.4, 0.6, 0.1, 50)
        assert out == pytest.approx(0.5, abs=1e-9)
