"""Rotation rates of quasiperiodic orbits from a projection onto a circle.

Points are mapped to the plane, the angle about a reference point is taken
in turns, consecutive differences are lifted to real numbers, and their
weighted Birkhoff average mod 1 is the rotation rate for that projection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import kernels as K
from .maps import Trajectory
from .wba import WeightKind, as_packed, build_weights, convergence_profile, wb_average
from .xprec import XReal, frac, pack_reals, unpack_real, wrap_half

MIN_RADIUS = 1e-12
CENTER_SAMPLES = 1000
# Every lifted difference sits in a half-open window of halfwidth 1/2, so the
# observed halfwidth never exceeds 1/2.  Projections without a hole come out
# at 0.4999...; valid ones seen so far stay below 0.4.
MAX_HALFWIDTH = 0.45


class DegenerateProjectionError(ValueError):
    pass


class NoLiftError(ValueError):
    def __init__(self, halfwidth: float, limit: float):
        super().__init__(
            f"projection admits no lift: branch halfwidth {halfwidth:.6g} >= {limit:g}"
        )
        self.halfwidth = halfwidth


def _xr(v) -> XReal:
    return v if isinstance(v, XReal) else XReal(v)


@dataclass(frozen=True)
class ComplexComponent:
    """(Re, Im) of one complex coordinate of the orbit."""

    index: int = 0


@dataclass(frozen=True)
class RadiusDelay:
    """Delay plane (r_{n+lag}, r_n) of the distance r_n from (ref_u, ref_v)."""

    ref_u: XReal
    ref_v: XReal
    component: int = 0
    lag: int = 1

    def __post_init__(self):
        object.__setattr__(self, "ref_u", _xr(self.ref_u))
        object.__setattr__(self, "ref_v", _xr(self.ref_v))
        if self.lag < 1:
            raise ValueError("lag must be a positive integer")


@dataclass(frozen=True)
class ProjectionSpec:
    planar: Union[ComplexComponent, RadiusDelay]
    reference: tuple = (XReal(0), XReal(0))

    def __post_init__(self):
        u, v = self.reference
        object.__setattr__(self, "reference", (_xr(u), _xr(v)))

    def describe(self) -> dict:
        u, v = self.reference
        out = {"reference": [str(u), str(v)]}
        p = self.planar
        if isinstance(p, RadiusDelay):
            out.update(
                planar="radius-delay",
                center=[str(p.ref_u), str(p.ref_v)],
                component=p.component,
                lag=p.lag,
            )
        else:
            out.update(planar="complex", component=p.index)
        return out


@dataclass(frozen=True, eq=False)
class LiftedSeries:
    """Lifted angle differences (turns) and the largest distance from the branch center."""

    deltas: np.ndarray = field(repr=False)
    center: float
    branch_halfwidth: float

    def __post_init__(self):
        self.deltas.flags.writeable = False

    def __len__(self):
        return self.deltas.shape[0]

    def __getitem__(self, n: int) -> XReal:
        return unpack_real(self.deltas[n])


@dataclass(frozen=True)
class RotationEstimate:
    rate: XReal
    weight_kind: WeightKind
    n_used: int
    profile: Optional[list] = None
    lifted: Optional[LiftedSeries] = field(default=None, repr=False, compare=False)

    @property
    def half_turn(self) -> XReal:
        """The representative of the rate in (-1/2, 1/2]."""
        return wrap_half(self.rate)


def _angles_packed(angles) -> np.ndarray:
    if isinstance(angles, np.ndarray) and angles.ndim == 2:
        return as_packed(angles)
    if isinstance(angles, np.ndarray):
        out = np.zeros((angles.shape[0], 2))
        out[:, 0] = angles
        return out
    return pack_reals(angles)


def project_to_angles(traj: Trajectory, spec: ProjectionSpec) -> np.ndarray:
    """Angles in turns, packed (M, 2), of the planar images about the reference.

    M equals len(traj) for a complex component and len(traj) - lag for a
    radius-delay plane.
    """
    planar = spec.planar
    u, v = (np.array(c.parts) for c in spec.reference)
    if isinstance(planar, ComplexComponent):
        pts = traj.component(planar.index)
        px, py = pts[:, 0:2], pts[:, 2:4]
    elif isinstance(planar, RadiusDelay):
        if len(traj) < planar.lag + 2:
            raise ValueError(f"need at least {planar.lag + 2} points for lag {planar.lag}")
        r = K.radii(
            traj.component(planar.component),
            np.array(planar.ref_u.parts),
            np.array(planar.ref_v.parts),
        )
        if float(r[:, 0].min()) < MIN_RADIUS:
            raise DegenerateProjectionError("degenerate projection: radius below 1e-12")
        px = np.ascontiguousarray(r[planar.lag :])
        py = np.ascontiguousarray(r[: -planar.lag])
    else:
        raise TypeError(f"unsupported planar projection {type(planar).__name__}")
    angles, dmin2 = K.angles_about(
        np.ascontiguousarray(px), np.ascontiguousarray(py), u, v
    )
    if dmin2 == 0.0:
        raise DegenerateProjectionError("degenerate projection: a point equals the reference")
    return angles


def branch_center(angles: np.ndarray) -> float:
    """Median of the leading raw differences, each wrapped to (-1/2, 1/2]."""
    m = min(CENTER_SAMPLES, angles.shape[0] - 1)
    d = angles[1 : m + 1, 0] - angles[:m, 0] + (angles[1 : m + 1, 1] - angles[:m, 1])
    d = d - np.ceil(d - 0.5)
    return float(np.median(d))


def lift_angle_differences(angles, max_halfwidth: float = MAX_HALFWIDTH) -> LiftedSeries:
    """Lift consecutive angle differences into one half-turn window.

    Each difference is placed in (c - 1/2, c + 1/2] around the branch center
    c.  A halfwidth reaching ``max_halfwidth`` means the differences are not
    confined to any half-turn window and no lift exists.
    """
    packed = _angles_packed(angles)
    if packed.shape[0] < 2:
        raise ValueError("need at least 2 angles")
    c = branch_center(packed)
    deltas, width = K.lift(packed, c)
    if width >= max_halfwidth:
        raise NoLiftError(width, max_halfwidth)
    return LiftedSeries(deltas, c, width)


def rate_from_lift(
    lifted: LiftedSeries,
    kind: WeightKind = WeightKind.bump(2),
    checkpoints: Optional[Sequence[int]] = None,
) -> RotationEstimate:
    n = len(lifted)
    rate = frac(wb_average(lifted.deltas, build_weights(kind, n)))
    profile = None
    if checkpoints:
        profile = [(m, frac(val)) for m, val in convergence_profile(lifted.deltas, kind, checkpoints)]
    return RotationEstimate(rate, kind, n, profile, lifted)


def rate_from_angles(angles, kind: WeightKind = WeightKind.bump(2), **kw) -> RotationEstimate:
    max_halfwidth = kw.pop("max_halfwidth", MAX_HALFWIDTH)
    return rate_from_lift(lift_angle_differences(angles, max_halfwidth), kind, **kw)


def rotation_rate(
    traj: Trajectory,
    spec: ProjectionSpec,
    kind: WeightKind = WeightKind.bump(2),
    checkpoints: Optional[Sequence[int]] = None,
    max_halfwidth: float = MAX_HALFWIDTH,
) -> RotationEstimate:
    """Weighted average of the lifted angle differences, reduced to [0, 1)."""
    angles = project_to_angles(traj, spec)
    return rate_from_angles(angles, kind, checkpoints=checkpoints, max_halfwidth=max_halfwidth)
