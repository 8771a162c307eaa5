"""Hot bit-level simulation paths with two interchangeable backends.

The numba backend (default whenever numba imports) JIT-compiles the
per-frame loops; the pure-numpy twin takes over when numba is missing or
when the environment sets NDNOMA_NUMBA=0. Both consume identical
caller-drawn standard normals; `python -m ndnoma.bench` compares them.

Every block driver derives all of its randomness from the generator it is
handed, in a documented fixed order, so a (seed, block) pair fully
determines the outcome regardless of worker scheduling.
"""

from __future__ import annotations

import os

import numpy as np

from ..channel import FadingModel, draw_channel_components
from ..downlink import DownlinkParams
from ..downlink import static_chi as _dl_static_chi
from ..uplink import UplinkParams
from ..uplink import static_chi as _ul_static_chi


def _pick_backend():
    flag = os.environ.get("NDNOMA_NUMBA", "").strip().lower()
    if flag in ("0", "false", "off", "no"):
        from . import numpy_impl

        return numpy_impl, "numpy"
    try:
        from . import numba_impl

        return numba_impl, "numba"
    except ImportError:
        from . import numpy_impl

        return numpy_impl, "numpy"


_BACKEND, _BACKEND_NAME = _pick_backend()


def backend_name() -> str:
    """Name of the backend selected at import time."""
    return _BACKEND_NAME


def get_backend(name: str):
    """Explicit backend module by name, for tests and benchmarks."""
    if name == "numba":
        from . import numba_impl

        return numba_impl
    if name == "numpy":
        from . import numpy_impl

        return numpy_impl
    raise ValueError(f"unknown backend {name!r}")


def _channel_columns(h, fading, n_bits, rng):
    # fixed draw order: a pinned channel consumes no randomness
    if h is None:
        return draw_channel_components(fading, n_bits, rng)
    h = complex(h)
    return np.full(n_bits, h.real), np.full(n_bits, h.imag)


def uplink_block_errors(params: UplinkParams, fading: FadingModel, n_bits: int,
                        rng, threshold_mode: str = "clt",
                        h1=None, h2=None, backend=None):
    """Simulate n_bits uplink frames; returns (err_u1, err_u2).

    Draw order: U1 bits, U2 bits, h1, h2, then per-sample normals for
    s1, s2, w_re, w_im.
    """
    if threshold_mode not in ("clt", "static"):
        raise ValueError(f"unknown threshold_mode {threshold_mode!r}")
    impl = _BACKEND if backend is None else backend
    n = params.n_samples
    b1 = rng.integers(0, 2, n_bits, dtype=np.uint8)
    b2 = rng.integers(0, 2, n_bits, dtype=np.uint8)
    h1r, h1i = _channel_columns(h1, fading, n_bits, rng)
    h2r, h2i = _channel_columns(h2, fading, n_bits, rng)
    z1 = rng.standard_normal((n_bits, n))
    z2 = rng.standard_normal((n_bits, n))
    zwr = rng.standard_normal((n_bits, n))
    zwi = rng.standard_normal((n_bits, n))
    return impl.uplink_block(
        b1, b2, h1r, h1i, h2r, h2i, z1, z2, zwr, zwi,
        params.m1_low, params.sigma1_sq, params.sigma2_low_sq,
        params.sigma2_high_sq, params.sigma_w_sq,
        threshold_mode == "clt", _ul_static_chi(params) * params.sigma_w_sq,
    )


def downlink_block_errors(params: DownlinkParams, fading: FadingModel,
                          n_bits: int, rng, threshold_mode: str = "clt",
                          h1=None, h2=None, backend=None):
    """Simulate n_bits downlink frames (each carries both users' bits);
    returns (err_u1, err_u2, err_both).

    Draw order: U1 bits, U2 bits, h1, h2, then per-sample normals for
    s_bs, w1_re, w1_im, w2_re, w2_im.
    """
    if threshold_mode not in ("clt", "static"):
        raise ValueError(f"unknown threshold_mode {threshold_mode!r}")
    impl = _BACKEND if backend is None else backend
    n = params.n_samples
    b1 = rng.integers(0, 2, n_bits, dtype=np.uint8)
    b2 = rng.integers(0, 2, n_bits, dtype=np.uint8)
    h1r, h1i = _channel_columns(h1, fading, n_bits, rng)
    h2r, h2i = _channel_columns(h2, fading, n_bits, rng)
    zs = rng.standard_normal((n_bits, n))
    zw1r = rng.standard_normal((n_bits, n))
    zw1i = rng.standard_normal((n_bits, n))
    zw2r = rng.standard_normal((n_bits, n))
    zw2i = rng.standard_normal((n_bits, n))
    return impl.downlink_block(
        b1, b2, h1r, h1i, h2r, h2i, zs, zw1r, zw1i, zw2r, zw2i,
        params.m1_low, params.sigma2_low_sq, params.sigma2_high_sq,
        params.sigma_w_sq,
        threshold_mode == "clt", _dl_static_chi(params) * params.sigma_w_sq,
    )


def noisemod_block_errors(sig_l_sq, sig_h_sq, sigma_w_sq, n_sub, fading,
                          n_bits, rng, h=None, backend=None):
    """Single-user variance-keyed NoiseMod link over n_sub samples per bit;
    returns the error count.

    Draw order: bits, h, then per-sample normals for s, w_re, w_im.
    """
    impl = _BACKEND if backend is None else backend
    bits = rng.integers(0, 2, n_bits, dtype=np.uint8)
    hr, hi = _channel_columns(h, fading, n_bits, rng)
    z = rng.standard_normal((n_bits, n_sub))
    zwr = rng.standard_normal((n_bits, n_sub))
    zwi = rng.standard_normal((n_bits, n_sub))
    return impl.noisemod_block(bits, hr, hi, z, zwr, zwi,
                               sig_l_sq, sig_h_sq, sigma_w_sq)


def pdnoma_block_errors(rho_far, p_total, sigma_w_sq, fading, n_symbols, rng,
                        backend=None):
    """PD-NOMA downlink pair with SIC at the near user; returns
    (err_near, err_far).

    Two i.i.d. channels are drawn per symbol and ordered: the
    instantaneously stronger one is the near (low-power, SIC) user. Draw
    order: far bits, near bits, channel A, channel B, far noise, near noise.
    """
    impl = _BACKEND if backend is None else backend
    b_far = rng.integers(0, 2, n_symbols, dtype=np.uint8)
    b_near = rng.integers(0, 2, n_symbols, dtype=np.uint8)
    ar, ai = draw_channel_components(fading, n_symbols, rng)
    br, bi = draw_channel_components(fading, n_symbols, rng)
    a_near = ar * ar + ai * ai >= br * br + bi * bi
    hnr = np.where(a_near, ar, br)
    hni = np.where(a_near, ai, bi)
    hfr = np.where(a_near, br, ar)
    hfi = np.where(a_near, bi, ai)
    zfr = rng.standard_normal(n_symbols)
    zfi = rng.standard_normal(n_symbols)
    znr = rng.standard_normal(n_symbols)
    zni = rng.standard_normal(n_symbols)
    return impl.pdnoma_block(b_far, b_near, hfr, hfi, hnr, hni,
                             zfr, zfi, znr, zni,
                             float(rho_far), float(p_total), float(sigma_w_sq))
