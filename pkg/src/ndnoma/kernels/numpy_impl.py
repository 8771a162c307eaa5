"""Vectorized pure-numpy kernels (fallback backend).

Same contracts as the numba twins in numba_impl: all randomness is drawn by
the caller and passed in as standard-normal arrays, so both backends consume
identical draws and differ only in floating-point summation order.
"""

import numpy as np


def _gamma_eq(ex_r, ex_i, ex_c, cr, ci, s2l_sq, s2h_sq, sw_sq, n):
    # equal-error variance threshold from the quadratic-form moments;
    # ex_* carry any interference terms that do not key on the bit
    swh = 0.5 * sw_sq
    nm1 = n - 1.0
    sr0 = ex_r + cr * cr * s2l_sq + swh
    si0 = ex_i + ci * ci * s2l_sq + swh
    c0 = ex_c + cr * ci * s2l_sq
    sr1 = ex_r + cr * cr * s2h_sq + swh
    si1 = ex_i + ci * ci * s2h_sq + swh
    c1 = ex_c + cr * ci * s2h_sq
    mu0 = n * (sr0 + si0) / nm1
    mu1 = n * (sr1 + si1) / nm1
    sd0 = np.sqrt(2.0 * n * (sr0 * sr0 + si0 * si0 + 2.0 * c0 * c0)) / nm1
    sd1 = np.sqrt(2.0 * n * (sr1 * sr1 + si1 * si1 + 2.0 * c1 * c1)) / nm1
    return (sd0 * mu1 + sd1 * mu0) / (sd0 + sd1)


def uplink_block(b1, b2, h1r, h1i, h2r, h2i, z1, z2, zwr, zwi,
                 m1_low, sigma1_sq, sig2l_sq, sig2h_sq, sigma_w_sq,
                 use_clt, gamma_static):
    n = z1.shape[1]
    m1 = np.where(b1 == 0, m1_low, -m1_low)
    sd2 = np.where(b2 == 0, np.sqrt(sig2l_sq), np.sqrt(sig2h_sq))
    sdw = np.sqrt(0.5 * sigma_w_sq)
    s1 = m1[:, None] + np.sqrt(sigma1_sq) * z1
    s2 = sd2[:, None] * z2
    yr = h1r[:, None] * s1 + h2r[:, None] * s2 + sdw * zwr
    yi = h1i[:, None] * s1 + h2i[:, None] * s2 + sdw * zwi

    myr = yr.mean(axis=1)
    myi = yi.mean(axis=1)
    det1 = (myr * h1r + myi * h1i < 0.0).astype(np.uint8)

    s_y2 = (((yr - myr[:, None]) ** 2).sum(axis=1)
            + ((yi - myi[:, None]) ** 2).sum(axis=1)) / (n - 1.0)
    if use_clt:
        gamma = _gamma_eq(h1r * h1r * sigma1_sq, h1i * h1i * sigma1_sq,
                          h1r * h1i * sigma1_sq, h2r, h2i,
                          sig2l_sq, sig2h_sq, sigma_w_sq, float(n))
    else:
        gamma = gamma_static
    det2 = (s_y2 > gamma).astype(np.uint8)
    return int(np.count_nonzero(det1 != b1)), int(np.count_nonzero(det2 != b2))


def downlink_block(b1, b2, h1r, h1i, h2r, h2i, zs, zw1r, zw1i, zw2r, zw2i,
                   m1_low, sig2l_sq, sig2h_sq, sigma_w_sq,
                   use_clt, gamma_static):
    n = zs.shape[1]
    m1 = np.where(b1 == 0, m1_low, -m1_low)
    sd2 = np.where(b2 == 0, np.sqrt(sig2l_sq), np.sqrt(sig2h_sq))
    sdw = np.sqrt(0.5 * sigma_w_sq)
    s = m1[:, None] + sd2[:, None] * zs

    y1r = h1r[:, None] * s + sdw * zw1r
    y1i = h1i[:, None] * s + sdw * zw1i
    det1 = (y1r.mean(axis=1) * h1r + y1i.mean(axis=1) * h1i < 0.0).astype(np.uint8)

    y2r = h2r[:, None] * s + sdw * zw2r
    y2i = h2i[:, None] * s + sdw * zw2i
    m2r = y2r.mean(axis=1)
    m2i = y2i.mean(axis=1)
    s_y2 = (((y2r - m2r[:, None]) ** 2).sum(axis=1)
            + ((y2i - m2i[:, None]) ** 2).sum(axis=1)) / (n - 1.0)
    if use_clt:
        gamma = _gamma_eq(0.0, 0.0, 0.0, h2r, h2i,
                          sig2l_sq, sig2h_sq, sigma_w_sq, float(n))
    else:
        gamma = gamma_static
    det2 = (s_y2 > gamma).astype(np.uint8)

    e1 = det1 != b1
    e2 = det2 != b2
    return (int(np.count_nonzero(e1)), int(np.count_nonzero(e2)),
            int(np.count_nonzero(e1 & e2)))


def noisemod_block(bits, hr, hi, z, zwr, zwi, sig_l_sq, sig_h_sq, sigma_w_sq):
    n = z.shape[1]
    sd = np.where(bits == 0, np.sqrt(sig_l_sq), np.sqrt(sig_h_sq))
    sdw = np.sqrt(0.5 * sigma_w_sq)
    s = sd[:, None] * z
    yr = hr[:, None] * s + sdw * zwr
    yi = hi[:, None] * s + sdw * zwi
    myr = yr.mean(axis=1)
    myi = yi.mean(axis=1)
    s_y2 = (((yr - myr[:, None]) ** 2).sum(axis=1)
            + ((yi - myi[:, None]) ** 2).sum(axis=1)) / (n - 1.0)
    gamma = _gamma_eq(0.0, 0.0, 0.0, hr, hi,
                      sig_l_sq, sig_h_sq, sigma_w_sq, float(n))
    det = (s_y2 > gamma).astype(np.uint8)
    return int(np.count_nonzero(det != bits))


def pdnoma_block(b_far, b_near, hfr, hfi, hnr, hni, zfr, zfi, znr, zni,
                 rho_far, p_total, sigma_w_sq):
    a_far = np.sqrt(rho_far * p_total)
    a_near = np.sqrt((1.0 - rho_far) * p_total)
    sdw = np.sqrt(0.5 * sigma_w_sq)
    s = a_far * (1.0 - 2.0 * b_far) + a_near * (1.0 - 2.0 * b_near)

    # far user: decode own symbol treating the near signal as noise
    yfr = hfr * s + sdw * zfr
    yfi = hfi * s + sdw * zfi
    det_far = (yfr * hfr + yfi * hfi < 0.0).astype(np.uint8)

    # near user: decode far symbol, re-modulate, subtract, decode own
    ynr = hnr * s + sdw * znr
    yni = hni * s + sdw * zni
    far_at_near = (ynr * hnr + yni * hni < 0.0).astype(np.uint8)
    x_hat = a_far * (1.0 - 2.0 * far_at_near)
    rr = ynr - hnr * x_hat
    ri = yni - hni * x_hat
    det_near = (rr * hnr + ri * hni < 0.0).astype(np.uint8)

    return (int(np.count_nonzero(det_near != b_near)),
            int(np.count_nonzero(det_far != b_far)))
