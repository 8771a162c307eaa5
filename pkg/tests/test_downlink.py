import dataclasses
import math

import numpy as np
import pytest
from scipy.stats import norm

from ndnoma import kernels
from ndnoma.channel import FadingModel
from ndnoma.core_stats import stream
from ndnoma.downlink import (
    cond_bep_u1_downlink,
    cond_bep_u2_downlink,
    derive_downlink_params,
    derive_downlink_params_from_noise,
    detect_u1_downlink,
    detect_u2_downlink,
    exact_cond_bep_u2_downlink,
    rx_user,
    tx_bs,
)
from ndnoma.harness import binomial_ci99
from ndnoma.uplink import cond_bep_u1_uplink, derive_uplink_params

REF = derive_downlink_params(1.0, 0.5, 10.0, 1.0, 100)


class TestDeriveParams:
    def test_power_split(self):
        p = REF
        assert p.m1_low**2 == pytest.approx(0.5, rel=1e-12)
        assert 0.5 * (p.sigma2_low_sq + p.sigma2_high_sq) == pytest.approx(0.5, rel=1e-12)
        assert p.sigma2_high_sq == pytest.approx(10 * p.sigma2_low_sq, rel=1e-12)
        assert p.sigma_w_sq == pytest.approx(p.sigma2_low_sq, rel=1e-12)

    def test_from_noise_holds_sigma_w_exactly(self):
        p = derive_downlink_params_from_noise(1.0, 0.5, 10.0, 0.2784, 150)
        assert p.sigma_w_sq == 0.2784

    @pytest.mark.parametrize(
        "kwargs",
        [dict(psi=0.0), dict(psi=1.0), dict(alpha=0.9), dict(delta=-1.0),
         dict(n_samples=1), dict(p_total=0.0)],
    )
    def test_rejects_out_of_range(self, kwargs):
        args = dict(p_total=1.0, psi=0.5, alpha=10.0, delta=1.0, n_samples=100)
        args.update(kwargs)
        with pytest.raises(ValueError):
            derive_downlink_params(**args)


class TestComposite:
    def test_degenerate_variance_constant_frame(self):
        p = dataclasses.replace(REF, sigma2_low_sq=0.0)
        assert np.array_equal(tx_bs(0, 0, p, stream(30, 0)), np.full(100, p.m1_low))

    def test_all_four_bit_combinations_moments(self):
        rng = stream(30, 1)
        for bit1, mean in ((0, REF.m1_low), (1, REF.m1_high)):
            for bit2, var in ((0, REF.sigma2_low_sq), (1, REF.sigma2_high_sq)):
                pooled = np.concatenate(
                    [tx_bs(bit1, bit2, REF, rng) for _ in range(10**4)])
                se = math.sqrt(var / pooled.size)
                assert abs(pooled.mean() - mean) < 4 * se
                assert pooled.var(ddof=1) == pytest.approx(var, rel=0.01)

    def test_equiprobable_bits_second_moment_is_total_power(self):
        rng = stream(30, 2)
        bits = rng.integers(0, 2, (10**4, 2))
        pooled = np.concatenate([tx_bs(b1, b2, REF, rng) for b1, b2 in bits])
        assert (pooled**2).mean() == pytest.approx(REF.p_total, rel=0.01)


class TestRxUser:
    def test_identity(self):
        s = np.arange(6.0)
        y = rx_user(s, 1 + 0j, 0.0, stream(31, 0))
        assert np.array_equal(y.real, s)

    def test_rotation(self):
        s = np.arange(6.0)
        y = rx_user(s, 1j, 0.0, stream(31, 1))
        assert np.array_equal(y.imag, s)
        assert np.array_equal(y.real, np.zeros(6))

    def test_received_variance(self):
        h = 0.7 - 0.4j
        rng = stream(31, 2)
        p = dataclasses.replace(REF, n_samples=10**6)
        y = rx_user(tx_bs(0, 1, p, rng), h, p.sigma_w_sq, rng)
        want = abs(h) ** 2 * p.sigma2_high_sq + p.sigma_w_sq
        got = np.var(y.real, ddof=1) + np.var(y.imag, ddof=1)
        assert got == pytest.approx(want, rel=0.01)


class TestDetectors:
    def test_u1_noiseless(self):
        h1 = -0.2 + 0.9j
        assert detect_u1_downlink(np.full(100, h1 * REF.m1_low), h1, REF) == 0
        assert detect_u1_downlink(np.full(100, h1 * REF.m1_high), h1, REF) == 1

    def test_u1_agrees_with_distance_rule(self):
        rng = stream(32, 0)
        for _ in range(10**4):
            frame = rng.standard_normal(8) + 1j * rng.standard_normal(8)
            h1 = complex(*rng.normal(0, 0.8, 2))
            ybar = frame.mean()
            d0 = abs(ybar - h1 * REF.m1_low) ** 2
            d1 = abs(ybar - h1 * REF.m1_high) ** 2
            assert detect_u1_downlink(frame, h1, REF) == (0 if d0 <= d1 else 1)

    def test_u2_constant_frame(self):
        assert detect_u2_downlink(np.full(100, 1.0 + 0j), 1 + 0j, REF) == 0

    def test_u2_huge_variance(self):
        rng = stream(32, 1)
        frame = 50.0 * (rng.standard_normal(100) + 1j * rng.standard_normal(100))
        assert detect_u2_downlink(frame, 1 + 0j, REF) == 1

    def test_u2_alpha_one_coin_flip(self):
        p = derive_downlink_params(1.0, 0.5, 1.0 + 1e-12, 1.0, 50)
        trials = 10**5
        _, e2, _ = kernels.downlink_block_errors(
            p, FadingModel(0.0), trials, stream(32, 2))
        assert abs(e2 / trials - 0.5) <= binomial_ci99(e2, trials)


class TestCondBeps:
    def test_u1_zero_channel(self):
        assert cond_bep_u1_downlink(0j, REF) == 0.5

    def test_u1_n_doubling_sqrt2(self):
        from ndnoma.downlink import _u1_stat_var

        h1 = 0.6 - 0.2j
        p1 = derive_downlink_params(1.0, 0.5, 10.0, 0.05, 64)
        p2 = derive_downlink_params(1.0, 0.5, 10.0, 0.05, 128)
        m_d = abs(h1) ** 2 * p1.m1_low**2
        for sig in (p1.sigma2_low_sq, p1.sigma2_high_sq):
            z1 = m_d / math.sqrt(_u1_stat_var(
                np.complex128(h1), sig, p1.sigma_w_sq, p1.m1_low, 64))
            z2 = m_d / math.sqrt(_u1_stat_var(
                np.complex128(h1), sig, p2.sigma_w_sq, p2.m1_low, 128))
            assert z2 / z1 == pytest.approx(math.sqrt(2), rel=1e-12)
        assert cond_bep_u1_downlink(h1, p2) < cond_bep_u1_downlink(h1, p1)

    def test_u1_fixed_channel_matches_simulation(self):
        h1 = 0.45 + 0.2j
        p = derive_downlink_params(1.0, 0.5, 10.0, 1.0, 100)
        bits = 2 * 10**6
        e1 = 0
        for blk in range(4):
            a, _, _ = kernels.downlink_block_errors(
                p, FadingModel(0.0), bits // 4, stream(33, blk), h1=h1, h2=1 + 0j)
            e1 += a
        assert abs(e1 / bits - cond_bep_u1_downlink(h1, p)) <= binomial_ci99(e1, bits)

    def test_u2_degenerate_cases(self):
        assert cond_bep_u2_downlink(0j, REF) == pytest.approx(0.5, abs=1e-12)
        p = derive_downlink_params(1.0, 0.5, 1.0 + 1e-12, 1.0, 100)
        assert cond_bep_u2_downlink(0.8 - 0.1j, p) == pytest.approx(0.5, abs=1e-6)

    def test_u2_fixed_channel_matches_simulation(self):
        h2 = 0.18 + 0.10j  # sits at BER ~ 0.065, inside the CLT's 5% band
        p = derive_downlink_params(1.0, 0.5, 10.0, 1.0, 100)
        bits = 2 * 10**6
        e2 = 0
        for blk in range(4):
            _, b, _ = kernels.downlink_block_errors(
                p, FadingModel(0.0), bits // 4, stream(34, blk), h1=1 + 0j, h2=h2)
            e2 += b
        ber = e2 / bits
        clt = cond_bep_u2_downlink(h2, p)
        exact = exact_cond_bep_u2_downlink(h2, p)
        assert ber > 1e-3
        assert abs(clt - ber) / ber < 0.05
        assert abs(exact - ber) <= binomial_ci99(e2, bits)


def test_joint_error_accounting():
    # a downlink frame carries both bits; the both-wrong count is bounded by
    # each marginal count and the marginals are what the rows report
    p = derive_downlink_params(1.0, 0.5, 10.0, 0.01, 50)
    e1, e2, both = kernels.downlink_block_errors(
        p, FadingModel(0.0), 50_000, stream(35, 0))
    assert 0 < both <= min(e1, e2)
    assert e1 + e2 - both <= 50_000


def test_no_saturation_strictly_decreasing_theory():
    # downlink U1 theory over the sweep grid, common channel draws: strictly
    # decreasing in delta (no interference floor)
    rng = stream(36, 0)
    model = FadingModel.from_k_db(10.0)
    mu, sd = model.component_mean, model.component_std
    z = rng.standard_normal((2, 200_000))
    h1 = (mu + sd * z[0]) + 1j * (mu + sd * z[1])
    vals = []
    for d_db in (-40.0, -30.0, -20.0, -10.0, -5.0, 0.0, 5.0):
        p = derive_downlink_params(1.0, 0.5, 10.0, 10 ** (d_db / 10), 50)
        vals.append(cond_bep_u1_downlink(h1, p).mean())
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_downlink_u1_bep_below_uplink_at_matched_variance():
    # matched variance allocations: downlink composite variance numerically
    # equal to uplink sigma1^2, so the uplink expression adds only the
    # non-negative |h2|^2 interference terms
    rng = stream(36, 1)
    up = derive_uplink_params(1.0, 0.01, 10.0, 1.0, 100)
    v = up.sigma1_sq
    for _ in range(200):
        h1 = complex(*rng.normal(0.4, 0.5, 2))
        h2 = complex(*rng.normal(0.0, 1.0, 2))
        # build a downlink point whose composite variance equals v for both
        # hypotheses by squeezing alpha toward 1
        psi = up.m1_low**2 / (up.m1_low**2 + v)
        p_dl = derive_downlink_params(up.m1_low**2 + v, psi, 1.0 + 1e-9,
                                      v / up.sigma_w_sq, 100)
        dl = cond_bep_u1_downlink(h1, p_dl)
        ul = cond_bep_u1_uplink(h1, h2, up)
        assert dl <= ul + 1e-12
