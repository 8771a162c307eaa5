"""Numba-compiled kernels (default backend).

Per-frame loops over caller-drawn standard normals; signatures and math
match numpy_impl exactly, only the summation order differs.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _gamma_eq(ex_r, ex_i, ex_c, cr, ci, s2l_sq, s2h_sq, sw_sq, n):
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
    sd0 = math.sqrt(2.0 * n * (sr0 * sr0 + si0 * si0 + 2.0 * c0 * c0)) / nm1
    sd1 = math.sqrt(2.0 * n * (sr1 * sr1 + si1 * si1 + 2.0 * c1 * c1)) / nm1
    return (sd0 * mu1 + sd1 * mu0) / (sd0 + sd1)


@njit(cache=True)
def uplink_block(b1, b2, h1r, h1i, h2r, h2i, z1, z2, zwr, zwi,
                 m1_low, sigma1_sq, sig2l_sq, sig2h_sq, sigma_w_sq,
                 use_clt, gamma_static):
    n_bits, n = z1.shape
    sd1 = math.sqrt(sigma1_sq)
    sd2l = math.sqrt(sig2l_sq)
    sd2h = math.sqrt(sig2h_sq)
    sdw = math.sqrt(0.5 * sigma_w_sq)
    yr = np.empty(n)
    yi = np.empty(n)
    err1 = 0
    err2 = 0
    for i in range(n_bits):
        c1r, c1i = h1r[i], h1i[i]
        c2r, c2i = h2r[i], h2i[i]
        m1 = m1_low if b1[i] == 0 else -m1_low
        sd2 = sd2l if b2[i] == 0 else sd2h
        sr = 0.0
        si = 0.0
        for j in range(n):
            s1 = m1 + sd1 * z1[i, j]
            s2 = sd2 * z2[i, j]
            vr = c1r * s1 + c2r * s2 + sdw * zwr[i, j]
            vi = c1i * s1 + c2i * s2 + sdw * zwi[i, j]
            yr[j] = vr
            yi[j] = vi
            sr += vr
            si += vi
        myr = sr / n
        myi = si / n
        det1 = 0 if myr * c1r + myi * c1i >= 0.0 else 1
        if det1 != b1[i]:
            err1 += 1
        acc = 0.0
        for j in range(n):
            acc += (yr[j] - myr) ** 2 + (yi[j] - myi) ** 2
        s_y2 = acc / (n - 1.0)
        if use_clt:
            gamma = _gamma_eq(c1r * c1r * sigma1_sq, c1i * c1i * sigma1_sq,
                              c1r * c1i * sigma1_sq, c2r, c2i,
                              sig2l_sq, sig2h_sq, sigma_w_sq, float(n))
        else:
            gamma = gamma_static
        det2 = 1 if s_y2 > gamma else 0
        if det2 != b2[i]:
            err2 += 1
    return err1, err2


@njit(cache=True)
def downlink_block(b1, b2, h1r, h1i, h2r, h2i, zs, zw1r, zw1i, zw2r, zw2i,
                   m1_low, sig2l_sq, sig2h_sq, sigma_w_sq,
                   use_clt, gamma_static):
    n_bits, n = zs.shape
    sd2l = math.sqrt(sig2l_sq)
    sd2h = math.sqrt(sig2h_sq)
    sdw = math.sqrt(0.5 * sigma_w_sq)
    y2r = np.empty(n)
    y2i = np.empty(n)
    err1 = 0
    err2 = 0
    err_both = 0
    for i in range(n_bits):
        c1r, c1i = h1r[i], h1i[i]
        c2r, c2i = h2r[i], h2i[i]
        m1 = m1_low if b1[i] == 0 else -m1_low
        sd2 = sd2l if b2[i] == 0 else sd2h
        s1r = 0.0
        s1i = 0.0
        s2r = 0.0
        s2i = 0.0
        for j in range(n):
            s = m1 + sd2 * zs[i, j]
            v1r = c1r * s + sdw * zw1r[i, j]
            v1i = c1i * s + sdw * zw1i[i, j]
            v2r = c2r * s + sdw * zw2r[i, j]
            v2i = c2i * s + sdw * zw2i[i, j]
            s1r += v1r
            s1i += v1i
            y2r[j] = v2r
            y2i[j] = v2i
            s2r += v2r
            s2i += v2i
        det1 = 0 if (s1r / n) * c1r + (s1i / n) * c1i >= 0.0 else 1
        e1 = det1 != b1[i]
        if e1:
            err1 += 1
        m2r = s2r / n
        m2i = s2i / n
        acc = 0.0
        for j in range(n):
            acc += (y2r[j] - m2r) ** 2 + (y2i[j] - m2i) ** 2
        s_y2 = acc / (n - 1.0)
        if use_clt:
            gamma = _gamma_eq(0.0, 0.0, 0.0, c2r, c2i,
                              sig2l_sq, sig2h_sq, sigma_w_sq, float(n))
        else:
            gamma = gamma_static
        det2 = 1 if s_y2 > gamma else 0
        e2 = det2 != b2[i]
        if e2:
            err2 += 1
        if e1 and e2:
            err_both += 1
    return err1, err2, err_both


@njit(cache=True)
def noisemod_block(bits, hr, hi, z, zwr, zwi, sig_l_sq, sig_h_sq, sigma_w_sq):
    n_bits, n = z.shape
    sdl = math.sqrt(sig_l_sq)
    sdh = math.sqrt(sig_h_sq)
    sdw = math.sqrt(0.5 * sigma_w_sq)
    yr = np.empty(n)
    yi = np.empty(n)
    err = 0
    for i in range(n_bits):
        cr, ci = hr[i], hi[i]
        sd = sdl if bits[i] == 0 else sdh
        sr = 0.0
        si = 0.0
        for j in range(n):
            s = sd * z[i, j]
            vr = cr * s + sdw * zwr[i, j]
            vi = ci * s + sdw * zwi[i, j]
            yr[j] = vr
            yi[j] = vi
            sr += vr
            si += vi
        myr = sr / n
        myi = si / n
        acc = 0.0
        for j in range(n):
            acc += (yr[j] - myr) ** 2 + (yi[j] - myi) ** 2
        s_y2 = acc / (n - 1.0)
        gamma = _gamma_eq(0.0, 0.0, 0.0, cr, ci,
                          sig_l_sq, sig_h_sq, sigma_w_sq, float(n))
        det = 1 if s_y2 > gamma else 0
        if det != bits[i]:
            err += 1
    return err


@njit(cache=True)
def pdnoma_block(b_far, b_near, hfr, hfi, hnr, hni, zfr, zfi, znr, zni,
                 rho_far, p_total, sigma_w_sq):
    n_sym = b_far.shape[0]
    a_far = math.sqrt(rho_far * p_total)
    a_near = math.sqrt((1.0 - rho_far) * p_total)
    sdw = math.sqrt(0.5 * sigma_w_sq)
    err_near = 0
    err_far = 0
    for i in range(n_sym):
        s = a_far * (1.0 - 2.0 * b_far[i]) + a_near * (1.0 - 2.0 * b_near[i])

        yfr = hfr[i] * s + sdw * zfr[i]
        yfi = hfi[i] * s + sdw * zfi[i]
        det_far = 0 if yfr * hfr[i] + yfi * hfi[i] >= 0.0 else 1
        if det_far != b_far[i]:
            err_far += 1

        ynr = hnr[i] * s + sdw * znr[i]
        yni = hni[i] * s + sdw * zni[i]
        far_at_near = 0 if ynr * hnr[i] + yni * hni[i] >= 0.0 else 1
        x_hat = a_far * (1.0 - 2.0 * far_at_near)
        rr = ynr - hnr[i] * x_hat
        ri = yni - hni[i] * x_hat
        det_near = 0 if rr * hnr[i] + ri * hni[i] >= 0.0 else 1
        if det_near != b_near[i]:
            err_near += 1
    return err_near, err_far
