"""Example maps with a Siegel disk/ball and extended-precision orbit generation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import kernels as K
from .xprec import (
    PI,
    TWO_PI,
    XComplex,
    XReal,
    cos,
    exp_i2pi,
    unpack_complex,
)

ESCAPE_RADIUS = 1e6


class EscapedOrbitError(RuntimeError):
    """Orbit left the bounded region (|point| > 1e6)."""

    def __init__(self, index: int):
        super().__init__(f"escaped orbit: |point| exceeded {ESCAPE_RADIUS:g} at iterate {index}")
        self.index = index


def _xr(v) -> XReal:
    return v if isinstance(v, XReal) else XReal(v)


def _xc(v) -> XComplex:
    return v if isinstance(v, XComplex) else XComplex(v)


@dataclass(frozen=True)
class SiegelMapParams:
    """z -> z^2 + e^{i 2 pi rho} z."""

    rho: XReal

    def __post_init__(self):
        object.__setattr__(self, "rho", _xr(self.rho))
        if not (0 < self.rho < 1):
            raise ValueError("rho must lie in (0, 1)")

    @property
    def multiplier(self) -> XComplex:
        return exp_i2pi(self.rho)

    def describe(self) -> dict:
        return {"rho": str(self.rho)}


@dataclass(frozen=True)
class HenonParams:
    """(x, y) -> (y, beta (y^2 + alpha) - beta^2 x) with
    alpha = 2 cos(theta) cos(phi) - cos(phi)^2 and beta = e^{i theta}.
    """

    theta: XReal
    phi: XReal
    alpha: XReal = field(init=False, repr=False)
    beta: XComplex = field(init=False, repr=False)

    def __post_init__(self):
        th, ph = _xr(self.theta), _xr(self.phi)
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "phi", ph)
        cph = cos(ph)
        object.__setattr__(self, "alpha", 2 * cos(th) * cph - cph * cph)
        object.__setattr__(self, "beta", exp_i2pi(th / TWO_PI))

    @classmethod
    def from_rotations(cls, rho1, rho2) -> "HenonParams":
        """theta = (rho1 + rho2) pi, phi = (rho1 - rho2) pi."""
        rho1, rho2 = _xr(rho1), _xr(rho2)
        return cls((rho1 + rho2) * PI, (rho1 - rho2) * PI)

    @property
    def rotations(self) -> tuple[XReal, XReal]:
        """((theta + phi) / 2 pi, (theta - phi) / 2 pi)."""
        return (self.theta + self.phi) / TWO_PI, (self.theta - self.phi) / TWO_PI

    def describe(self) -> dict:
        return {"theta": str(self.theta), "phi": str(self.phi)}


Generator = Union[SiegelMapParams, HenonParams]


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Stored orbit points.

    ``points`` is (N, 4) for maps of C and (N, 8) for maps of C^2, using the
    packed layout of ``xprec``.  ``meta`` records how the orbit was made.
    """

    points: np.ndarray = field(repr=False)
    meta: dict

    def __post_init__(self):
        if self.points.ndim != 2 or self.points.shape[1] not in (4, 8):
            raise ValueError("points must have shape (N, 4) or (N, 8)")
        if not np.all(np.isfinite(self.points)):
            raise ValueError("trajectory contains non-finite values")
        self.points.flags.writeable = False
        meta = dict(self.meta)
        meta.setdefault("N", self.points.shape[0])
        if meta["N"] != self.points.shape[0]:
            raise ValueError("meta N does not match the number of points")
        object.__setattr__(self, "meta", meta)

    def __len__(self):
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1] // 4

    def component(self, index: int) -> np.ndarray:
        if not 0 <= index < self.dim:
            raise IndexError(f"component {index} out of range for dimension {self.dim}")
        return np.ascontiguousarray(self.points[:, 4 * index : 4 * index + 4])

    def point(self, n: int):
        row = self.points[n]
        if self.dim == 1:
            return unpack_complex(row)
        return unpack_complex(row[:4]), unpack_complex(row[4:])

    def head(self, n: int) -> "Trajectory":
        meta = dict(self.meta, N=n)
        return Trajectory(np.array(self.points[:n]), meta)

    def tail(self, start: int) -> "Trajectory":
        meta = dict(self.meta, N=len(self) - start, dropped=self.meta.get("dropped", 0) + start)
        return Trajectory(np.array(self.points[start:]), meta)


def siegel_step(params: SiegelMapParams, z) -> XComplex:
    z = _xc(z)
    return z * z + params.multiplier * z


def henon_step(params: HenonParams, x, y) -> tuple[XComplex, XComplex]:
    x, y = _xc(x), _xc(y)
    b = params.beta
    return y, b * (y * y + params.alpha) - b * b * x


def henon_fixed_point(params: HenonParams) -> tuple[XComplex, XComplex]:
    """The fixed point x = y = cos(phi), whose eigenvalues lie on the unit circle."""
    c = XComplex(cos(params.phi), 0)
    return c, c


def henon_eigenvalues(params: HenonParams) -> tuple[XComplex, XComplex]:
    """(e^{i(theta + phi)}, e^{i(theta - phi)}) at the fixed point."""
    r1, r2 = params.rotations
    return exp_i2pi(r1), exp_i2pi(r2)


def henon_jacobian(params: HenonParams, x, y) -> tuple[tuple[XComplex, XComplex], tuple[XComplex, XComplex]]:
    """Analytic Jacobian of the Hénon map at (x, y)."""
    y = _xc(y)
    b = params.beta
    return (XComplex(0), XComplex(1)), (-(b * b), 2 * b * y)


def henon_ball_point(params: HenonParams, amp_1, amp_2) -> tuple[XComplex, XComplex]:
    """Fixed point plus amp_1 * v_1 + amp_2 * v_2 along the eigenvectors (1, lambda_j).

    Gives small-amplitude starting points inside the Siegel ball; the linear
    dynamics rotate mode j by (theta +/- phi) / 2 pi per step.
    """
    x_s, y_s = henon_fixed_point(params)
    l1, l2 = henon_eigenvalues(params)
    a1, a2 = _xc(amp_1), _xc(amp_2)
    return x_s + a1 + a2, y_s + a1 * l1 + a2 * l2


def iterate(generator: Generator, z0, n: int, stride: int = 1) -> Trajectory:
    """Orbit of ``z0`` with ``n`` stored points, keeping every ``stride``-th iterate.

    ``z0`` is a complex scalar for the Siegel map and an (x0, y0) pair for
    the Hénon map.  No transient is discarded.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if stride < 1:
        raise ValueError("stride must be at least 1")
    escape2 = ESCAPE_RADIUS**2
    if isinstance(generator, SiegelMapParams):
        z0 = _xc(z0)
        pts, esc = K.siegel_orbit(
            np.array(generator.multiplier.parts), np.array(z0.parts), int(n), int(stride), escape2
        )
        meta = {
            "generator": "siegel",
            "params": generator.describe(),
            "initial": [str(z0)],
        }
    elif isinstance(generator, HenonParams):
        x0, y0 = (_xc(v) for v in z0)
        b = generator.beta
        pts, esc = K.henon_orbit(
            np.array(generator.alpha.parts),
            np.array(b.parts),
            np.array((b * b).parts),
            np.array(x0.parts),
            np.array(y0.parts),
            int(n),
            int(stride),
            escape2,
        )
        meta = {
            "generator": "henon",
            "params": generator.describe(),
            "initial": [str(x0), str(y0)],
        }
    else:
        raise TypeError(f"unsupported generator {type(generator).__name__}")
    if esc >= 0:
        raise EscapedOrbitError(int(esc))
    meta.update(N=int(n), stride=int(stride), transient=0)
    return Trajectory(pts, meta)
