"""Double-double primitives.

A value is an unevaluated pair ``hi + lo`` of float64 with ``|lo| <= ulp(hi)/2``,
giving about 106 mantissa bits.  Every function takes and returns the two
halves separately and contains no data-dependent branches, so the same code is
compiled by numba for scalars and runs elementwise on numpy arrays in the
fallback backend.
"""

from fractions import Fraction
from math import factorial

import mpmath
import numpy as np

from ._backend import jit


def _split_exact(x):
    hi = float(x)
    return hi, float(x - Fraction(hi))


def _inverse_factorials(n):
    out = np.empty((n + 1, 2))
    for k in range(n + 1):
        out[k] = _split_exact(Fraction(1, factorial(k)))
    return out


_INV_FACT = _inverse_factorials(20)
# alternating Taylor coefficients for sin(x)/x and cos(x) in powers of x^2
SIN_C = np.array([(-1) ** m * _INV_FACT[2 * m + 1] for m in range(9)])
COS_C = np.array([(-1) ** m * _INV_FACT[2 * m] for m in range(10)])
EXPM1_C = _INV_FACT[1:12].copy()


def _mp_split(x):
    hi = float(x)
    return hi, float(x - hi)


def _twiddle_table():
    # cos/sin of j/64 turns, exact to double-double
    with mpmath.workdps(60):
        rows = []
        for j in range(64):
            c = mpmath.cospi(mpmath.mpf(j) / 32)
            s = mpmath.sinpi(mpmath.mpf(j) / 32)
            rows.append(_mp_split(c) + _mp_split(s))
        return np.array(rows)


TWIDDLE = _twiddle_table()

with mpmath.workdps(60):
    TWO_PI_HI, TWO_PI_LO = _mp_split(2 * mpmath.pi)
    LN2_HI, _rest = _mp_split(mpmath.log(2))
    LN2_LO, LN2_LO2 = _mp_split(mpmath.log(2) - LN2_HI)

_SPLITTER = 134217729.0  # 2**27 + 1


@jit
def two_sum(a, b):
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


@jit
def quick_two_sum(a, b):
    s = a + b
    e = b - (s - a)
    return s, e


@jit
def split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


@jit
def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


@jit
def add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    t, f = two_sum(al, bl)
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


@jit
def sub(ah, al, bh, bl):
    return add(ah, al, -bh, -bl)


@jit
def add_d(ah, al, b):
    s, e = two_sum(ah, b)
    e = e + al
    return quick_two_sum(s, e)


@jit
def mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return quick_two_sum(p, e)


@jit
def mul_d(ah, al, b):
    p, e = two_prod(ah, b)
    e = e + al * b
    return quick_two_sum(p, e)


@jit
def div(ah, al, bh, bl):
    q1 = ah / bh
    ph, pl = mul_d(bh, bl, q1)
    rh, rl = sub(ah, al, ph, pl)
    q2 = rh / bh
    ph, pl = mul_d(bh, bl, q2)
    rh, rl = sub(rh, rl, ph, pl)
    q3 = rh / bh
    q1, q2 = quick_two_sum(q1, q2)
    return add_d(q1, q2, q3)


# Careful variants for scalar arithmetic: every partial error term is carried
# exactly until one final rounding, giving results within 2^-107 relative.
# About three times the cost of the plain versions, so kernels keep those.

@jit
def add_acc(ah, al, bh, bl):
    s, e1 = two_sum(ah, bh)
    s, e2 = two_sum(s, al)
    s, e3 = two_sum(s, bl)
    t, e4 = two_sum(e1, e2)
    t, e5 = two_sum(t, e3)
    h, lo = two_sum(s, t)
    return quick_two_sum(h, lo + (e4 + e5))


@jit
def mul_acc(ah, al, bh, bl):
    h, lo = two_prod(ah, bh)
    t1, t2 = two_prod(ah, bl)
    t3, t4 = two_prod(al, bh)
    m, me = two_sum(t1, t3)
    lo, le = two_sum(lo, m)
    h, lo = two_sum(h, lo)
    return quick_two_sum(h, lo + (me + le + t2 + t4 + al * bl))


@jit
def div_acc(ah, al, bh, bl):
    q1 = ah / bh
    p1, p2 = two_prod(bh, q1)
    p3, p4 = two_prod(bl, q1)
    # ah - p1 is exact: p1 is within a factor 2 of ah
    rh, rl = two_sum(ah - p1, -p2)
    t, te = two_sum(al, -p3)
    rh, rl = add_acc(rh, rl, t, te - p4)
    q2 = rh / bh
    p1, p2 = two_prod(bh, q2)
    s, e = two_sum(rh, -p1)
    q3 = (s + (e - p2 + rl - bl * q2)) / bh
    h, lo = two_sum(q1, q2)
    return quick_two_sum(h, lo + q3)


@jit
def sqrt(ah, al):
    s = np.sqrt(ah)
    ph, pl = two_prod(s, s)
    rh, rl = sub(ah, al, ph, pl)
    # zero input: keep the correction finite
    d = 2.0 * s + (s == 0.0) * 1.0
    return quick_two_sum(s, rh / d)


@jit
def frac(ah, al):
    """Fractional part in [0, 1) (hi may round up to exactly 1.0)."""
    f = np.floor(ah)
    s, e = two_sum(ah, -f)
    s, e = quick_two_sum(s, e + al)
    # lo < 0 with integral hi leaves s slightly negative
    g = np.floor(s)
    s, e2 = two_sum(s, -g)
    return quick_two_sum(s, e + e2)


@jit
def mul_frac(m, ah, al):
    """frac(m * a) for an integer-valued double m; both partial products are exact."""
    ph, pe = two_prod(m, ah)
    sh, sl = two_sum(ph, -np.floor(ph))
    sh, sl = add_d(sh, sl, pe)
    qh, qe = two_prod(m, al)
    sh, sl = add(sh, sl, qh, qe)
    return frac(sh, sl)


@jit
def sincos2pi(th, tl):
    """(cos, sin) of 2*pi*t for t in turns, as ((c_hi, c_lo), (s_hi, s_lo))."""
    rh, rl = frac(th, tl)
    j = np.floor(rh * 64.0 + 0.5)
    rh, rl = add_d(rh, rl, -j / 64.0)
    idx = np.int64(j) % 64
    xh, xl = mul(rh, rl, TWO_PI_HI, TWO_PI_LO)
    yh, yl = mul(xh, xl, xh, xl)

    sh, sl = SIN_C[8, 0], SIN_C[8, 1]
    for m in range(7, -1, -1):
        sh, sl = mul(sh, sl, yh, yl)
        sh, sl = add(sh, sl, SIN_C[m, 0], SIN_C[m, 1])
    sh, sl = mul(sh, sl, xh, xl)

    ch, cl = COS_C[9, 0], COS_C[9, 1]
    for m in range(8, -1, -1):
        ch, cl = mul(ch, cl, yh, yl)
        ch, cl = add(ch, cl, COS_C[m, 0], COS_C[m, 1])

    wch = TWIDDLE[idx, 0]
    wcl = TWIDDLE[idx, 1]
    wsh = TWIDDLE[idx, 2]
    wsl = TWIDDLE[idx, 3]
    p1h, p1l = mul(ch, cl, wch, wcl)
    p2h, p2l = mul(sh, sl, wsh, wsl)
    coh, col = sub(p1h, p1l, p2h, p2l)
    p1h, p1l = mul(sh, sl, wch, wcl)
    p2h, p2l = mul(ch, cl, wsh, wsl)
    sih, sil = add(p1h, p1l, p2h, p2l)
    return coh, col, sih, sil


@jit
def exp(ah, al):
    """e**a for moderate a (|a| < 700)."""
    m = np.floor(ah / LN2_HI + 0.5)
    # ln2 carried to three doubles; a two-term ln2 costs ~|m| * 1e-33
    ph, pl = two_prod(LN2_HI, m)
    rh, rl = sub(ah, al, ph, pl)
    ph, pl = two_prod(LN2_LO, m)
    rh, rl = sub(rh, rl, ph, pl)
    rh, rl = add_d(rh, rl, -LN2_LO2 * m)
    rh = rh / 1024.0
    rl = rl / 1024.0
    # expm1 by Horner, then ten squarings in expm1 form: s -> s*(2+s)
    sh, sl = EXPM1_C[10, 0], EXPM1_C[10, 1]
    for k in range(9, -1, -1):
        sh, sl = mul(sh, sl, rh, rl)
        sh, sl = add(sh, sl, EXPM1_C[k, 0], EXPM1_C[k, 1])
    sh, sl = mul(sh, sl, rh, rl)
    for _ in range(10):
        th, tl = add_d(sh, sl, 2.0)
        sh, sl = mul(sh, sl, th, tl)
    sh, sl = add_d(sh, sl, 1.0)
    scale = 2.0 ** m
    return sh * scale, sl * scale


@jit
def log(ah, al):
    """Natural log for a > 0: one Newton step on exp from the double estimate."""
    x = np.log(ah)
    eh, el = exp(-x, 0.0)
    th, tl = mul(ah, al, eh, el)
    th, tl = add_d(th, tl, -1.0)
    return add_d(th, tl, x)


@jit
def atan2_turns(yh, yl, xh, xl):
    """Angle of (x, y) in turns, reduced to [0, 1)."""
    t0 = np.arctan2(yh, xh) / TWO_PI_HI
    ch, cl, sh, sl = sincos2pi(t0, 0.0)
    p1h, p1l = mul(yh, yl, ch, cl)
    p2h, p2l = mul(xh, xl, sh, sl)
    nh, nl = sub(p1h, p1l, p2h, p2l)
    p1h, p1l = mul(xh, xl, ch, cl)
    p2h, p2l = mul(yh, yl, sh, sl)
    dh, dl = add(p1h, p1l, p2h, p2l)
    corr = (nh / dh) / TWO_PI_HI
    th, tl = two_sum(t0, corr)
    return frac(th, tl)


@jit
def cmul(arh, arl, aih, ail, brh, brl, bih, bil):
    p1h, p1l = mul(arh, arl, brh, brl)
    p2h, p2l = mul(aih, ail, bih, bil)
    rh, rl = sub(p1h, p1l, p2h, p2l)
    p1h, p1l = mul(arh, arl, bih, bil)
    p2h, p2l = mul(aih, ail, brh, brl)
    ih, il = add(p1h, p1l, p2h, p2l)
    return rh, rl, ih, il


@jit
def cadd(arh, arl, aih, ail, brh, brl, bih, bil):
    rh, rl = add(arh, arl, brh, brl)
    ih, il = add(aih, ail, bih, bil)
    return rh, rl, ih, il
