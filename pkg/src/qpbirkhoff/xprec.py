"""Extended-precision real and complex scalars on top of double-double.

Values carry ~32 significant decimal digits.  Text I/O uses exactly 36
significant digits, which round-trips.
"""

from __future__ import annotations

import decimal
import math
from fractions import Fraction
from numbers import Integral, Real

import numpy as np

from . import _dd

DIGITS = 36

_CTX = decimal.Context(prec=120, Emax=decimal.MAX_EMAX, Emin=decimal.MIN_EMIN)


class DomainError(ArithmeticError, ValueError):
    """Argument outside the domain of an operation."""


class XReal:
    """Immutable double-double real number."""

    __slots__ = ("_hi", "_lo")

    def __init__(self, value=0.0, lo: float = 0.0):
        if isinstance(value, XReal):
            hi, lo = value._hi, value._lo
        elif isinstance(value, str):
            hi, lo = _parse_decimal(value)
        elif isinstance(value, (decimal.Decimal, Fraction)) or (
            isinstance(value, Integral) and abs(value) >= 2**53
        ):
            hi, lo = _split_exact(value)
        else:
            hi, lo = _dd.two_sum(float(value), float(lo))
        object.__setattr__(self, "_hi", float(hi))
        object.__setattr__(self, "_lo", float(lo))

    def __setattr__(self, name, value):
        raise AttributeError("XReal is immutable")

    @classmethod
    def from_parts(cls, hi: float, lo: float) -> "XReal":
        out = object.__new__(cls)
        object.__setattr__(out, "_hi", float(hi))
        object.__setattr__(out, "_lo", float(lo))
        return out

    @property
    def hi(self) -> float:
        return self._hi

    @property
    def lo(self) -> float:
        return self._lo

    @property
    def parts(self) -> tuple[float, float]:
        return self._hi, self._lo

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return XReal.from_parts(*_dd.add_acc(self._hi, self._lo, o._hi, o._lo))

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return XReal.from_parts(*_dd.add_acc(self._hi, self._lo, -o._hi, -o._lo))

    def __rsub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return XReal.from_parts(*_dd.mul_acc(self._hi, self._lo, o._hi, o._lo))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        if o._hi == 0.0:
            raise DomainError("division by zero")
        return XReal.from_parts(*_dd.div_acc(self._hi, self._lo, o._hi, o._lo))

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n):
        if not isinstance(n, Integral):
            return NotImplemented
        base, out = (self, XReal(1)) if n >= 0 else (1 / self, XReal(1))
        n = abs(int(n))
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __neg__(self):
        return XReal.from_parts(-self._hi, -self._lo)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self._hi < 0 else self

    # comparison -------------------------------------------------------
    def _key(self):
        return (self._hi, self._lo)

    def __eq__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._key() == o._key()

    def __lt__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._key() < o._key()

    def __le__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._key() <= o._key()

    def __gt__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._key() > o._key()

    def __ge__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._key() >= o._key()

    def __hash__(self):
        return hash(self._key())

    def __bool__(self):
        return self._hi != 0.0

    # conversion -------------------------------------------------------
    def __float__(self):
        return self._hi + self._lo

    def to_decimal(self) -> decimal.Decimal:
        return _CTX.add(decimal.Decimal(self._hi), decimal.Decimal(self._lo))

    def to_fraction(self) -> Fraction:
        return Fraction(self._hi) + Fraction(self._lo)

    def __str__(self):
        return format_xreal(self)

    def __repr__(self):
        return f"XReal('{format_xreal(self)}')"


def _split_exact(value) -> tuple[float, float]:
    if isinstance(value, Fraction):
        hi = float(value)
        return hi, float(value - Fraction(hi))
    d = _CTX.create_decimal(value)
    hi = float(d)
    return hi, float(_CTX.subtract(d, decimal.Decimal(hi)))


def _parse_decimal(text: str) -> tuple[float, float]:
    s = text.strip()
    try:
        d = _CTX.create_decimal(s)
    except decimal.InvalidOperation:
        raise ValueError(f"not a decimal number: {text!r}") from None
    if not d.is_finite():
        raise ValueError(f"not a finite number: {text!r}")
    hi, lo = _split_exact(d)
    return _snap(hi, lo, d)


def _snap(hi: float, lo: float, d: decimal.Decimal) -> tuple[float, float]:
    # 36 digits do not pin down every bit of lo, so several pairs print to the
    # same text.  Take the one with lo on the coarsest power-of-two grid that
    # still prints to that text; this makes print/parse an identity.
    if hi == 0.0 or lo == 0.0:
        return hi, lo
    text = f"{d:.{DIGITS - 1}e}"

    def on_grid(k):
        q = math.ldexp(1.0, k)
        h2, l2 = _dd.quick_two_sum(hi, round(lo / q) * q)
        cand = _CTX.add(decimal.Decimal(h2), decimal.Decimal(l2))
        return (h2, l2) if f"{cand:.{DIGITS - 1}e}" == text else None

    fine = math.frexp(lo)[1] - 53
    coarse = math.frexp(hi)[1] - 53
    if on_grid(coarse) is not None:
        return on_grid(coarse)
    while coarse - fine > 1:
        mid = (coarse + fine) // 2
        if on_grid(mid) is None:
            coarse = mid
        else:
            fine = mid
    return on_grid(fine) or (hi, lo)


def _coerce(x):
    if isinstance(x, XReal):
        return x
    if isinstance(x, (Real, decimal.Decimal, str)) and not isinstance(x, bool):
        return XReal(x)
    return NotImplemented


def format_xreal(x: XReal, digits: int = DIGITS) -> str:
    """Decimal text with exactly ``digits`` significant digits."""
    if x.hi == 0.0 and x.lo == 0.0:
        return f"{0:.{digits - 1}e}"
    return f"{x.to_decimal():.{digits - 1}e}"


def parse_xreal(text: str) -> XReal:
    return XReal(text)


class XComplex:
    """Immutable complex number with XReal parts."""

    __slots__ = ("_re", "_im")

    def __init__(self, re=0.0, im=0.0):
        if isinstance(re, XComplex):
            re, im = re.re, re.im
        elif isinstance(re, complex):
            re, im = re.real, re.imag
        object.__setattr__(self, "_re", XReal(re))
        object.__setattr__(self, "_im", XReal(im))

    def __setattr__(self, name, value):
        raise AttributeError("XComplex is immutable")

    @classmethod
    def from_parts(cls, rh, rl, ih, il) -> "XComplex":
        out = object.__new__(cls)
        object.__setattr__(out, "_re", XReal.from_parts(rh, rl))
        object.__setattr__(out, "_im", XReal.from_parts(ih, il))
        return out

    @property
    def re(self) -> XReal:
        return self._re

    @property
    def im(self) -> XReal:
        return self._im

    @property
    def parts(self) -> tuple[float, float, float, float]:
        return self._re.hi, self._re.lo, self._im.hi, self._im.lo

    def __add__(self, other):
        o = _ccoerce(other)
        if o is NotImplemented:
            return o
        return XComplex(self._re + o._re, self._im + o._im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _ccoerce(other)
        if o is NotImplemented:
            return o
        return XComplex(self._re - o._re, self._im - o._im)

    def __rsub__(self, other):
        o = _ccoerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = _ccoerce(other)
        if o is NotImplemented:
            return o
        return XComplex.from_parts(*_dd.cmul(*self.parts, *o.parts))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _ccoerce(other)
        if o is NotImplemented:
            return o
        den = o.abs2()
        if den.hi == 0.0:
            raise DomainError("division by zero")
        num = self * o.conjugate()
        return XComplex(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        o = _ccoerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n):
        if not isinstance(n, Integral) or n < 0:
            return NotImplemented
        out, base = XComplex(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __neg__(self):
        return XComplex(-self._re, -self._im)

    def conjugate(self) -> "XComplex":
        return XComplex(self._re, -self._im)

    def abs2(self) -> XReal:
        return self._re * self._re + self._im * self._im

    def __abs__(self) -> XReal:
        return sqrt(self.abs2())

    def __eq__(self, other):
        o = _ccoerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._re == o._re and self._im == o._im

    def __hash__(self):
        return hash((self._re, self._im))

    def __complex__(self):
        return complex(float(self._re), float(self._im))

    def __str__(self):
        return format_xcomplex(self)

    def __repr__(self):
        return f"XComplex('{format_xcomplex(self)}')"


def _ccoerce(x):
    if isinstance(x, XComplex):
        return x
    if isinstance(x, complex):
        return XComplex(x)
    r = _coerce(x)
    if r is NotImplemented:
        return r
    return XComplex(r, 0)


def format_xcomplex(z: XComplex, digits: int = DIGITS) -> str:
    im = format_xreal(z.im, digits)
    sign = "" if im.startswith("-") else "+"
    return f"{format_xreal(z.re, digits)}{sign}{im}i"


def parse_xcomplex(text: str) -> XComplex:
    """Parse ``a``, ``bi``, ``a+bi`` or ``a-bi`` (``j`` accepted for ``i``)."""
    s = text.strip().replace(" ", "")
    if s.endswith(("i", "j")):
        body = s[:-1]
        # split at the last sign that is not part of an exponent
        cut = None
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-" and body[pos - 1] not in "eE":
                cut = pos
                break
        if cut is None:
            re_txt, im_txt = "0", body or "1"
        else:
            re_txt, im_txt = body[:cut], body[cut:]
        if im_txt in ("+", "-", ""):
            im_txt += "1"
        return XComplex(XReal(re_txt), XReal(im_txt))
    return XComplex(XReal(s), 0)


# elementary functions -----------------------------------------------------

def _as_xreal(a) -> XReal:
    return a if isinstance(a, XReal) else XReal(a)


def sqrt(a) -> XReal:
    a = _as_xreal(a)
    if a.hi < 0:
        raise DomainError("sqrt of a negative number")
    return XReal.from_parts(*_dd.sqrt(a.hi, a.lo))


def ln(a) -> XReal:
    a = _as_xreal(a)
    if a.hi <= 0:
        raise DomainError("ln of a non-positive number")
    return XReal.from_parts(*_dd.log(a.hi, a.lo))


def exp(a) -> XReal:
    a = _as_xreal(a)
    if a.hi > 709.0:
        raise DomainError("exp overflow")
    if a.hi < -700.0:
        return XReal(0)
    return XReal.from_parts(*_dd.exp(a.hi, a.lo))


def frac(a) -> XReal:
    """a mod 1 in [0, 1)."""
    a = _as_xreal(a)
    return XReal.from_parts(*_dd.frac(a.hi, a.lo))


def wrap_half(a) -> XReal:
    """Representative of a mod 1 in (-1/2, 1/2]."""
    f = frac(a)
    return f - 1 if f > 0.5 else f


def exp_i2pi(t) -> XComplex:
    """e^{i 2 pi t} for t in turns; t is reduced mod 1 first."""
    t = _as_xreal(t)
    return XComplex.from_parts(*_dd.sincos2pi(t.hi, t.lo))


def _radians_to_turns(a: XReal) -> XReal:
    return a / TWO_PI


def cos(a) -> XReal:
    return exp_i2pi(_radians_to_turns(_as_xreal(a))).re


def sin(a) -> XReal:
    return exp_i2pi(_radians_to_turns(_as_xreal(a))).im


def atan2_turns(y, x) -> XReal:
    """Angle of the vector (x, y) in turns, in [0, 1)."""
    y, x = _as_xreal(y), _as_xreal(x)
    if x.hi == 0.0 and y.hi == 0.0:
        raise DomainError("angle of the zero vector")
    return XReal.from_parts(*_dd.atan2_turns(y.hi, y.lo, x.hi, x.lo))


TWO_PI = XReal.from_parts(_dd.TWO_PI_HI, _dd.TWO_PI_LO)
PI = XReal.from_parts(_dd.TWO_PI_HI / 2, _dd.TWO_PI_LO / 2)


def golden() -> XReal:
    """(sqrt(5) - 1) / 2."""
    return (sqrt(5) - 1) / 2


def sqrt3half() -> XReal:
    return sqrt(3) / 2


NAMED_CONSTANTS = {
    "golden": golden,
    "sqrt3half": sqrt3half,
    "pi": lambda: PI,
}


def parse_named(text: str) -> XReal:
    """Decimal literal or one of the named constants (golden, sqrt3half, pi)."""
    key = text.strip().lower()
    if key in NAMED_CONSTANTS:
        return NAMED_CONSTANTS[key]()
    return XReal(text)


# packed arrays ---------------------------------------------------------------
# real values: float64 array (..., 2) = (hi, lo)
# complex values: float64 array (..., 4) = (re_hi, re_lo, im_hi, im_lo)

def pack_reals(values) -> np.ndarray:
    out = np.empty((len(values), 2))
    for i, v in enumerate(values):
        out[i] = _as_xreal(v).parts
    return out


def pack_complex(values) -> np.ndarray:
    out = np.empty((len(values), 4))
    for i, v in enumerate(values):
        out[i] = (v if isinstance(v, XComplex) else XComplex(v)).parts
    return out


def unpack_real(row) -> XReal:
    return XReal.from_parts(row[0], row[1])


def unpack_complex(row) -> XComplex:
    return XComplex.from_parts(row[0], row[1], row[2], row[3])
