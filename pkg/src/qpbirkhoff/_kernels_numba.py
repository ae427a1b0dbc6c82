"""Loop kernels compiled with numba.

Array layout: reals are (N, 2) [hi, lo]; complex values are (N, 4)
[re_hi, re_lo, im_hi, im_lo].  ``_kernels_numpy`` mirrors every function here.
"""

import numpy as np
from numba import njit, prange

from . import _dd
from ._dd import add, add_d, cmul, div, mul, sub

# weights whose exponent exceeds 75 ln 10 are flushed to zero
WEIGHT_CUTOFF = 75.0 * np.log(10.0)
MODE_BLOCK = 32
_LEVELS = 64


@njit(cache=True)
def _bump_arg(n, n_total, p):
    """[t(1-t)]^-p at t = n/N in double-double; t(1-t) = n(N-n)/N^2 exactly."""
    uh, ul = div(float(n * (n_total - n)), 0.0, float(n_total) * float(n_total), 0.0)
    qh, ql = uh, ul
    for _ in range(p - 1):
        qh, ql = mul(qh, ql, uh, ul)
    return div(1.0, 0.0, qh, ql)


@njit(cache=True)
def raw_weights(code, p, n_total):
    out = np.zeros((n_total, 2))
    for n in range(n_total):
        if code == 0:
            out[n, 0] = 1.0
            continue
        if n == 0:
            continue
        ah, al = _bump_arg(n, n_total, 1 if code == 2 else p)
        if code == 2:
            if ah > 700.0:
                continue
            ah, al = _dd.exp(ah, al)
        if ah > WEIGHT_CUTOFF:
            continue
        out[n, 0], out[n, 1] = _dd.exp(-ah, -al)
    return out


@njit(cache=True)
def pairwise_sum(a):
    m = a.shape[0]
    c = a.shape[1]
    if m == 0:
        return np.zeros(c)
    buf = a.copy()
    while m > 1:
        half = m // 2
        for i in range(half):
            for j in range(0, c, 2):
                buf[i, j], buf[i, j + 1] = add(
                    buf[2 * i, j], buf[2 * i, j + 1], buf[2 * i + 1, j], buf[2 * i + 1, j + 1]
                )
        if m % 2:
            buf[half] = buf[m - 1]
            m = half + 1
        else:
            m = half
    return buf[0].copy()


@njit(cache=True)
def scale_rows(w, f):
    """Elementwise w_n * f_n for real w (N, 2) and f with 2 or 4 columns."""
    out = np.empty_like(f)
    for n in range(f.shape[0]):
        for j in range(0, f.shape[1], 2):
            out[n, j], out[n, j + 1] = mul(w[n, 0], w[n, 1], f[n, j], f[n, j + 1])
    return out


@njit(cache=True)
def weighted_sum(w, f):
    return pairwise_sum(scale_rows(w, f))


@njit(cache=True)
def divide_rows(a, sh, sl):
    out = np.empty_like(a)
    for n in range(a.shape[0]):
        for j in range(0, a.shape[1], 2):
            out[n, j], out[n, j + 1] = div(a[n, j], a[n, j + 1], sh, sl)
    return out


@njit(cache=True)
def siegel_orbit(lam, z0, n_points, stride, escape2):
    """Iterate z -> z^2 + lam*z; keep every stride-th point.

    Returns (points, escape_index); escape_index is -1 when bounded.
    """
    out = np.zeros((n_points, 4))
    zrh, zrl, zih, zil = z0[0], z0[1], z0[2], z0[3]
    lrh, lrl, lih, lil = lam[0], lam[1], lam[2], lam[3]
    it = 0
    for i in range(n_points):
        out[i, 0], out[i, 1], out[i, 2], out[i, 3] = zrh, zrl, zih, zil
        if i == n_points - 1:
            break
        for _ in range(stride):
            srh, srl, sih, sil = cmul(zrh, zrl, zih, zil, zrh, zrl, zih, zil)
            prh, prl, pih, pil = cmul(lrh, lrl, lih, lil, zrh, zrl, zih, zil)
            zrh, zrl = add(srh, srl, prh, prl)
            zih, zil = add(sih, sil, pih, pil)
            it += 1
            if zrh * zrh + zih * zih > escape2 or not np.isfinite(zrh + zih):
                return out[: i + 1], it
    return out, -1


@njit(cache=True)
def henon_orbit(alpha, beta, beta2, x0, y0, n_points, stride, escape2):
    """Iterate (x, y) -> (y, beta*(y^2 + alpha) - beta^2*x); rows are (x, y)."""
    out = np.zeros((n_points, 8))
    xrh, xrl, xih, xil = x0[0], x0[1], x0[2], x0[3]
    yrh, yrl, yih, yil = y0[0], y0[1], y0[2], y0[3]
    it = 0
    for i in range(n_points):
        out[i, 0], out[i, 1], out[i, 2], out[i, 3] = xrh, xrl, xih, xil
        out[i, 4], out[i, 5], out[i, 6], out[i, 7] = yrh, yrl, yih, yil
        if i == n_points - 1:
            break
        for _ in range(stride):
            srh, srl, sih, sil = cmul(yrh, yrl, yih, yil, yrh, yrl, yih, yil)
            srh, srl = add(srh, srl, alpha[0], alpha[1])
            srh, srl, sih, sil = cmul(beta[0], beta[1], beta[2], beta[3], srh, srl, sih, sil)
            prh, prl, pih, pil = cmul(beta2[0], beta2[1], beta2[2], beta2[3], xrh, xrl, xih, xil)
            nrh, nrl = sub(srh, srl, prh, prl)
            nih, nil = sub(sih, sil, pih, pil)
            xrh, xrl, xih, xil = yrh, yrl, yih, yil
            yrh, yrl, yih, yil = nrh, nrl, nih, nil
            it += 1
            m2 = xrh * xrh + xih * xih + yrh * yrh + yih * yih
            if m2 > escape2 or not np.isfinite(m2):
                return out[: i + 1], it
    return out, -1


@njit(cache=True)
def angles_about(px, py, u, v):
    """Angle in turns of (px - u, py - v); also returns the minimum squared distance."""
    n = px.shape[0]
    out = np.empty((n, 2))
    dmin = np.inf
    for i in range(n):
        xh, xl = sub(px[i, 0], px[i, 1], u[0], u[1])
        yh, yl = sub(py[i, 0], py[i, 1], v[0], v[1])
        d2 = xh * xh + yh * yh
        if d2 < dmin:
            dmin = d2
        if d2 == 0.0:
            out[i, 0], out[i, 1] = 0.0, 0.0
            continue
        out[i, 0], out[i, 1] = _dd.atan2_turns(yh, yl, xh, xl)
    return out, dmin


@njit(cache=True)
def radii(pts, u, v):
    n = pts.shape[0]
    out = np.empty((n, 2))
    for i in range(n):
        xh, xl = sub(pts[i, 0], pts[i, 1], u[0], u[1])
        yh, yl = sub(pts[i, 2], pts[i, 3], v[0], v[1])
        ah, al = mul(xh, xl, xh, xl)
        bh, bl = mul(yh, yl, yh, yl)
        sh, sl = add(ah, al, bh, bl)
        out[i, 0], out[i, 1] = _dd.sqrt(sh, sl)
    return out


@njit(cache=True)
def lift(angles, center):
    """Angle differences placed in the window (center - 1/2, center + 1/2]."""
    n = angles.shape[0] - 1
    out = np.empty((n, 2))
    width = 0.0
    for i in range(n):
        dh, dl = sub(angles[i + 1, 0], angles[i + 1, 1], angles[i, 0], angles[i, 1])
        m = np.ceil(dh - center - 0.5)
        dh, dl = add_d(dh, dl, -m)
        yh, yl = add_d(dh, dl, -center)
        if yh > 0.5 or (yh == 0.5 and yl > 0.0):
            dh, dl = add_d(dh, dl, -1.0)
        elif yh < -0.5 or (yh == -0.5 and yl <= 0.0):
            dh, dl = add_d(dh, dl, 1.0)
        out[i, 0], out[i, 1] = dh, dl
        dev = abs(dh - center + dl)
        if dev > width:
            width = dev
    return out, width


@njit(cache=True)
def phases(n_total, rho):
    out = np.empty((n_total, 2))
    for n in range(n_total):
        out[n, 0], out[n, 1] = _dd.mul_frac(float(n), rho[0], rho[1])
    return out


@njit(cache=True)
def unit_phasors(p, sign):
    """exp(sign * i 2 pi p_n) for each phase."""
    n = p.shape[0]
    out = np.empty((n, 4))
    for i in range(n):
        ch, cl, sh, sl = _dd.sincos2pi(p[i, 0], p[i, 1])
        out[i, 0], out[i, 1], out[i, 2], out[i, 3] = ch, cl, sign * sh, sign * sl
    return out


@njit(cache=True, parallel=True)
def spectrum(terms, p, k_lo, k_hi):
    """sum_n terms_n * exp(-i 2 pi k p_n) for k in [k_lo, k_hi).

    Modes are handled in blocks: each block re-anchors the phasor exactly at
    its first mode and advances by complex multiplication.  Sums over n are
    streaming pairwise (binary-counter) sums.
    """
    n_total = terms.shape[0]
    n_modes = k_hi - k_lo
    out = np.zeros((n_modes, 4))
    step = unit_phasors(p, -1.0)
    n_blocks = (n_modes + MODE_BLOCK - 1) // MODE_BLOCK
    for b in prange(n_blocks):
        k0 = k_lo + b * MODE_BLOCK
        bs = min(MODE_BLOCK, k_hi - k0)
        acc = np.zeros((_LEVELS, bs, 4))
        cur = np.empty((bs, 4))
        for n in range(n_total):
            fh, fl = _dd.mul_frac(float(k0), p[n, 0], p[n, 1])
            ch, cl, sh, sl = _dd.sincos2pi(fh, fl)
            rh, rl, ih, il = cmul(
                terms[n, 0], terms[n, 1], terms[n, 2], terms[n, 3], ch, cl, -sh, -sl
            )
            for j in range(bs):
                cur[j, 0], cur[j, 1], cur[j, 2], cur[j, 3] = rh, rl, ih, il
                if j + 1 < bs:
                    rh, rl, ih, il = cmul(
                        rh, rl, ih, il, step[n, 0], step[n, 1], step[n, 2], step[n, 3]
                    )
            level = 0
            nn = n
            while nn & 1:
                for j in range(bs):
                    (cur[j, 0], cur[j, 1], cur[j, 2], cur[j, 3]) = _dd.cadd(
                        acc[level, j, 0], acc[level, j, 1], acc[level, j, 2], acc[level, j, 3],
                        cur[j, 0], cur[j, 1], cur[j, 2], cur[j, 3],
                    )
                level += 1
                nn >>= 1
            acc[level, :, :] = cur
        tot = np.zeros((bs, 4))
        have = False
        level = 0
        nn = n_total
        while nn:
            if nn & 1:
                if have:
                    for j in range(bs):
                        (tot[j, 0], tot[j, 1], tot[j, 2], tot[j, 3]) = _dd.cadd(
                            acc[level, j, 0], acc[level, j, 1], acc[level, j, 2], acc[level, j, 3],
                            tot[j, 0], tot[j, 1], tot[j, 2], tot[j, 3],
                        )
                else:
                    tot[:, :] = acc[level]
                    have = True
            level += 1
            nn >>= 1
        out[b * MODE_BLOCK : b * MODE_BLOCK + bs] = tot
    return out


@njit(cache=True, parallel=True)
def horner(coeffs, p):
    """sum_k c_k exp(i 2 pi k p_n) for each phase p_n (Horner in the phasor)."""
    n = p.shape[0]
    kmax = coeffs.shape[0] - 1
    out = np.empty((n, 4))
    for i in prange(n):
        eh, el, fh, fl = _dd.sincos2pi(p[i, 0], p[i, 1])
        rh, rl, ih, il = coeffs[kmax, 0], coeffs[kmax, 1], coeffs[kmax, 2], coeffs[kmax, 3]
        for k in range(kmax - 1, -1, -1):
            rh, rl, ih, il = cmul(rh, rl, ih, il, eh, el, fh, fl)
            rh, rl = add(rh, rl, coeffs[k, 0], coeffs[k, 1])
            ih, il = add(ih, il, coeffs[k, 2], coeffs[k, 3])
        out[i, 0], out[i, 1], out[i, 2], out[i, 3] = rh, rl, ih, il
    return out


@njit(cache=True)
def geometric_scale(coeffs, fh, fl):
    """c_k * f^k with f^k accumulated by repeated multiplication."""
    out = np.empty_like(coeffs)
    gh, gl = 1.0, 0.0
    for k in range(coeffs.shape[0]):
        out[k, 0], out[k, 1] = mul(coeffs[k, 0], coeffs[k, 1], gh, gl)
        out[k, 2], out[k, 3] = mul(coeffs[k, 2], coeffs[k, 3], gh, gl)
        gh, gl = mul(gh, gl, fh, fl)
    return out


@njit(cache=True)
def k2_abs2(coeffs):
    """k^2 |c_k|^2 as a real (K+1, 2) array."""
    out = np.empty((coeffs.shape[0], 2))
    for k in range(coeffs.shape[0]):
        ah, al = mul(coeffs[k, 0], coeffs[k, 1], coeffs[k, 0], coeffs[k, 1])
        bh, bl = mul(coeffs[k, 2], coeffs[k, 3], coeffs[k, 2], coeffs[k, 3])
        sh, sl = add(ah, al, bh, bl)
        out[k, 0], out[k, 1] = _dd.mul_d(sh, sl, float(k) * float(k))
    return out


@njit(cache=True)
def sub_rows(a, b):
    out = np.empty_like(a)
    for n in range(a.shape[0]):
        for j in range(0, a.shape[1], 2):
            out[n, j], out[n, j + 1] = sub(a[n, j], a[n, j + 1], b[n, j], b[n, j + 1])
    return out
