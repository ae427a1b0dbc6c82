"""Pure-numpy mirror of ``_kernels_numba``.

Vectorized over the sample axis wherever the computation allows it; the map
iterations are inherently sequential and run as plain Python loops.
"""

import numpy as np

from . import _dd
from ._dd import add, cmul, div, mul, sub

WEIGHT_CUTOFF = 75.0 * np.log(10.0)


def _cols(a):
    return [a[:, j] for j in range(a.shape[1])]


def raw_weights(code, p, n_total):
    out = np.zeros((n_total, 2))
    if code == 0:
        out[:, 0] = 1.0
        return out
    n = np.arange(n_total, dtype=np.int64)
    num = (n * (n_total - n)).astype(float)
    live = num > 0
    num = np.where(live, num, 1.0)
    uh, ul = div(num, np.zeros_like(num), float(n_total) * float(n_total), 0.0)
    qh, ql = uh, ul
    for _ in range((1 if code == 2 else p) - 1):
        qh, ql = mul(qh, ql, uh, ul)
    ah, al = div(1.0, 0.0, qh, ql)
    if code == 2:
        live &= ah <= 700.0
        ah, al = _dd.exp(np.minimum(ah, 700.0), np.where(ah <= 700.0, al, 0.0))
    live &= ah <= WEIGHT_CUTOFF
    wh, wl = _dd.exp(-np.minimum(ah, WEIGHT_CUTOFF), np.where(live, -al, 0.0))
    out[:, 0] = np.where(live, wh, 0.0)
    out[:, 1] = np.where(live, wl, 0.0)
    return out


def pairwise_sum(a):
    m, c = a.shape
    if m == 0:
        return np.zeros(c)
    buf = a.copy()
    while m > 1:
        half = m // 2
        ev = buf[0 : 2 * half : 2]
        od = buf[1 : 2 * half : 2]
        nxt = np.empty((half + m % 2, c))
        for j in range(0, c, 2):
            nxt[:half, j], nxt[:half, j + 1] = add(ev[:, j], ev[:, j + 1], od[:, j], od[:, j + 1])
        if m % 2:
            nxt[half] = buf[m - 1]
        buf = nxt
        m = buf.shape[0]
    return buf[0].copy()


def scale_rows(w, f):
    out = np.empty_like(f)
    for j in range(0, f.shape[1], 2):
        out[:, j], out[:, j + 1] = mul(w[:, 0], w[:, 1], f[:, j], f[:, j + 1])
    return out


def weighted_sum(w, f):
    return pairwise_sum(scale_rows(w, f))


def divide_rows(a, sh, sl):
    out = np.empty_like(a)
    for j in range(0, a.shape[1], 2):
        out[:, j], out[:, j + 1] = div(a[:, j], a[:, j + 1], sh, sl)
    return out


def siegel_orbit(lam, z0, n_points, stride, escape2):
    out = np.zeros((n_points, 4))
    z = tuple(float(v) for v in z0)
    lam = tuple(float(v) for v in lam)
    it = 0
    for i in range(n_points):
        out[i] = z
        if i == n_points - 1:
            break
        for _ in range(stride):
            s = cmul(*z, *z)
            q = cmul(*lam, *z)
            z = _dd.cadd(*s, *q)
            it += 1
            if z[0] * z[0] + z[2] * z[2] > escape2 or not np.isfinite(z[0] + z[2]):
                return out[: i + 1], it
    return out, -1


def henon_orbit(alpha, beta, beta2, x0, y0, n_points, stride, escape2):
    out = np.zeros((n_points, 8))
    x = tuple(float(v) for v in x0)
    y = tuple(float(v) for v in y0)
    beta = tuple(float(v) for v in beta)
    beta2 = tuple(float(v) for v in beta2)
    it = 0
    for i in range(n_points):
        out[i, :4] = x
        out[i, 4:] = y
        if i == n_points - 1:
            break
        for _ in range(stride):
            sr, sl_, si, sil = cmul(*y, *y)
            sr, sl_ = add(sr, sl_, alpha[0], alpha[1])
            s = cmul(*beta, sr, sl_, si, sil)
            q = cmul(*beta2, *x)
            nr = sub(s[0], s[1], q[0], q[1])
            ni = sub(s[2], s[3], q[2], q[3])
            x, y = y, (nr[0], nr[1], ni[0], ni[1])
            it += 1
            m2 = x[0] ** 2 + x[2] ** 2 + y[0] ** 2 + y[2] ** 2
            if m2 > escape2 or not np.isfinite(m2):
                return out[: i + 1], it
    return out, -1


def angles_about(px, py, u, v):
    xh, xl = sub(px[:, 0], px[:, 1], u[0], u[1])
    yh, yl = sub(py[:, 0], py[:, 1], v[0], v[1])
    d2 = xh * xh + yh * yh
    zero = d2 == 0.0
    xh = np.where(zero, 1.0, xh)
    out = np.empty((px.shape[0], 2))
    out[:, 0], out[:, 1] = _dd.atan2_turns(yh, yl, xh, xl)
    out[zero] = 0.0
    dmin = float(d2.min()) if d2.size else np.inf
    return out, dmin


def radii(pts, u, v):
    xh, xl = sub(pts[:, 0], pts[:, 1], u[0], u[1])
    yh, yl = sub(pts[:, 2], pts[:, 3], v[0], v[1])
    ah, al = mul(xh, xl, xh, xl)
    bh, bl = mul(yh, yl, yh, yl)
    sh, sl = add(ah, al, bh, bl)
    out = np.empty((pts.shape[0], 2))
    out[:, 0], out[:, 1] = _dd.sqrt(sh, sl)
    return out


def lift(angles, center):
    dh, dl = sub(angles[1:, 0], angles[1:, 1], angles[:-1, 0], angles[:-1, 1])
    m = np.ceil(dh - center - 0.5)
    dh, dl = _dd.add_d(dh, dl, -m)
    yh, yl = _dd.add_d(dh, dl, -center)
    over = (yh > 0.5) | ((yh == 0.5) & (yl > 0.0))
    under = (yh < -0.5) | ((yh == -0.5) & (yl <= 0.0))
    dh, dl = _dd.add_d(dh, dl, -over.astype(float) + under.astype(float))
    out = np.empty((dh.shape[0], 2))
    out[:, 0], out[:, 1] = dh, dl
    width = float(np.max(np.abs(dh - center + dl))) if dh.size else 0.0
    return out, width


def phases(n_total, rho):
    n = np.arange(n_total, dtype=float)
    out = np.empty((n_total, 2))
    out[:, 0], out[:, 1] = _dd.mul_frac(n, rho[0], rho[1])
    return out


def unit_phasors(p, sign):
    out = np.empty((p.shape[0], 4))
    ch, cl, sh, sl = _dd.sincos2pi(p[:, 0], p[:, 1])
    out[:, 0], out[:, 1], out[:, 2], out[:, 3] = ch, cl, sign * sh, sign * sl
    return out


def spectrum(terms, p, k_lo, k_hi):
    # one exact phasor per mode; no recurrence needed when vectorized over n
    out = np.zeros((k_hi - k_lo, 4))
    t = _cols(terms)
    for i, k in enumerate(range(k_lo, k_hi)):
        fh, fl = _dd.mul_frac(float(k), p[:, 0], p[:, 1])
        ch, cl, sh, sl = _dd.sincos2pi(fh, fl)
        prod = np.stack(cmul(*t, ch, cl, -sh, -sl), axis=1)
        out[i] = pairwise_sum(prod)
    return out


def horner(coeffs, p):
    eh, el, fh, fl = _dd.sincos2pi(p[:, 0], p[:, 1])
    kmax = coeffs.shape[0] - 1
    n = p.shape[0]
    acc = [np.full(n, coeffs[kmax, j]) for j in range(4)]
    for k in range(kmax - 1, -1, -1):
        rh, rl, ih, il = cmul(*acc, eh, el, fh, fl)
        rh, rl = add(rh, rl, coeffs[k, 0], coeffs[k, 1])
        ih, il = add(ih, il, coeffs[k, 2], coeffs[k, 3])
        acc = [rh, rl, ih, il]
    return np.stack(acc, axis=1)


def geometric_scale(coeffs, fh, fl):
    out = np.empty_like(coeffs)
    gh, gl = 1.0, 0.0
    for k in range(coeffs.shape[0]):
        out[k, 0], out[k, 1] = mul(coeffs[k, 0], coeffs[k, 1], gh, gl)
        out[k, 2], out[k, 3] = mul(coeffs[k, 2], coeffs[k, 3], gh, gl)
        gh, gl = mul(gh, gl, fh, fl)
    return out


def k2_abs2(coeffs):
    ah, al = mul(coeffs[:, 0], coeffs[:, 1], coeffs[:, 0], coeffs[:, 1])
    bh, bl = mul(coeffs[:, 2], coeffs[:, 3], coeffs[:, 2], coeffs[:, 3])
    sh, sl = add(ah, al, bh, bl)
    k = np.arange(coeffs.shape[0], dtype=float)
    out = np.empty((coeffs.shape[0], 2))
    out[:, 0], out[:, 1] = _dd.mul_d(sh, sl, k * k)
    return out


def sub_rows(a, b):
    out = np.empty_like(a)
    for j in range(0, a.shape[1], 2):
        out[:, j], out[:, j + 1] = sub(a[:, j], a[:, j + 1], b[:, j], b[:, j + 1])
    return out
