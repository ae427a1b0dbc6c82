"""Linearizing conjugacy of an invariant curve from orbit samples.

For an orbit z_n = H(n rho) on an invariant circle, the Fourier coefficients
b_k of H are weighted Birkhoff averages of z_n e^{-i 2 pi k n rho}.  When the
curve is the image of the circle of radius R0 under an analytic map
h(w) = sum a_k w^k, the coefficients decay like R0^k and a_k = b_k / R0^k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import kernels as K
from .maps import Trajectory
from .wba import WeightKind, build_weights
from .xprec import TWO_PI, XComplex, XReal, frac, sqrt, unpack_complex, unpack_real

DEFAULT_FLOOR = XReal("1e-30")
EARLY_STOP = 50
MODE_BATCH = 128


class FitError(ValueError):
    pass


def _xr(v) -> XReal:
    return v if isinstance(v, XReal) else XReal(v)


def _magnitudes(coeffs: np.ndarray) -> np.ndarray:
    return np.hypot(coeffs[:, 0] + coeffs[:, 1], coeffs[:, 2] + coeffs[:, 3])


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Fourier coefficients b_0..b_K of one orbit component, packed (K+1, 4)."""

    rho: XReal
    coeffs: np.ndarray = field(repr=False)
    n_samples: int
    weight_kind: WeightKind
    noise_floor: XReal = DEFAULT_FLOOR

    def __post_init__(self):
        if self.coeffs.ndim != 2 or self.coeffs.shape[1] != 4 or self.coeffs.shape[0] < 2:
            raise ValueError("coeffs must have shape (K+1, 4) with K >= 1")
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("non-finite Fourier coefficient")
        self.coeffs.flags.writeable = False

    @property
    def k_max(self) -> int:
        return self.coeffs.shape[0] - 1

    def __len__(self):
        return self.coeffs.shape[0]

    def __getitem__(self, k: int) -> XComplex:
        return unpack_complex(self.coeffs[k])

    def magnitudes(self) -> np.ndarray:
        """|b_k| to double precision."""
        return _magnitudes(self.coeffs)

    def n_above_floor(self) -> int:
        return int(np.count_nonzero(self.magnitudes() > float(self.noise_floor)))


@dataclass(frozen=True, eq=False)
class ConjugacySeries:
    """Power-series coefficients a_k of h(w) = sum a_k w^k, packed (K+1, 4)."""

    r0: XReal
    a: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.a.flags.writeable = False

    @property
    def k_max(self) -> int:
        return self.a.shape[0] - 1

    def __getitem__(self, k: int) -> XComplex:
        return unpack_complex(self.a[k])

    def magnitudes(self) -> np.ndarray:
        return _magnitudes(self.a)


@dataclass(frozen=True)
class R0Fit:
    r0: XReal
    slope: float
    intercept: float
    residual_std: float
    k_used: np.ndarray = field(repr=False, compare=False)


def _weighted_terms(traj, component: int, kind: WeightKind) -> np.ndarray:
    z = traj.component(component) if isinstance(traj, Trajectory) else np.ascontiguousarray(traj)
    if z.ndim != 2 or z.shape[1] != 4:
        raise ValueError("samples must be complex, packed (N, 4)")
    return K.scale_rows(build_weights(kind, z.shape[0]).weights, z)


def _phases(rho, n: int) -> np.ndarray:
    rho = frac(_xr(rho))
    return K.phases(int(n), np.array(rho.parts))


def fourier_coefficient(
    traj, rho, k: int, kind: WeightKind = WeightKind.bump(2), component: int = 0
) -> XComplex:
    """Weighted average of z_n e^{-i 2 pi k n rho}."""
    if k < 0:
        raise ValueError("only k >= 0 is supported")
    terms = _weighted_terms(traj, component, kind)
    p = _phases(rho, terms.shape[0])
    return unpack_complex(K.spectrum(terms, p, int(k), int(k) + 1)[0])


def build_spectrum(
    traj,
    rho,
    k_max: int,
    kind: WeightKind = WeightKind.bump(2),
    floor=DEFAULT_FLOOR,
    component: int = 0,
    early_stop: Optional[int] = EARLY_STOP,
) -> Spectrum:
    """b_0..b_{k_max}, stopping once ``early_stop`` consecutive |b_k| < floor."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    floor = _xr(floor)
    rho = frac(_xr(rho))
    terms = _weighted_terms(traj, component, kind)
    p = _phases(rho, terms.shape[0])
    parts = []
    quiet = 0
    k = 0
    while k <= k_max:
        hi = min(k + MODE_BATCH, k_max + 1)
        block = K.spectrum(terms, p, k, hi)
        mags = _magnitudes(block)
        for j, m in enumerate(mags):
            quiet = quiet + 1 if m < floor.hi else 0
            if early_stop and quiet >= early_stop:
                block = block[: j + 1]
                break
        parts.append(block)
        k += block.shape[0]
        if early_stop and quiet >= early_stop:
            break
    coeffs = np.concatenate(parts)
    return Spectrum(rho, coeffs, terms.shape[0], kind, floor)


def fit_r0_details(
    spec: Spectrum,
    skip: int = 5,
    floor_margin: float = 1e2,
    decades: float = 15.0,
    top_margin: float = 1e-2,
    min_points: int = 10,
) -> R0Fit:
    """Least-squares line through ln|b_k| against k over the decay tail.

    Uses k >= ``skip`` with |b_k| above floor * floor_margin and at most
    ``decades`` decades higher (never above max|b| * top_margin).  R0 is an
    asymptotic rate, and the tail is where sub-exponential factors in b_k
    bend the line least.
    """
    mags = spec.magnitudes()
    k = np.arange(mags.shape[0])
    lo = float(spec.noise_floor) * floor_margin
    hi = min(float(mags.max()) * top_margin, lo * 10.0**decades)
    use = (k >= skip) & (mags > lo) & (mags < hi)
    if np.count_nonzero(use) < min_points:
        raise FitError(
            f"only {np.count_nonzero(use)} usable coefficients for the R0 fit (need {min_points})"
        )
    ks, y = k[use].astype(float), np.log(mags[use])
    slope, intercept = np.polyfit(ks, y, 1)
    resid = y - (slope * ks + intercept)
    r0 = math.exp(slope)
    if not 0.0 < r0 < 1.0:
        raise FitError(f"fitted R0 = {r0:g} is outside (0, 1)")
    return R0Fit(XReal(r0), float(slope), float(intercept), float(resid.std()), k[use])


def fit_r0(spec: Spectrum, **kw) -> XReal:
    """Decay radius R0 from the slope of ln|b_k|; good to about three digits."""
    return fit_r0_details(spec, **kw).r0


def _check_radius(r, name="r") -> XReal:
    r = _xr(r)
    if not 0 < r < 1:
        raise ValueError(f"{name} must lie in (0, 1)")
    return r


def power_series(spec: Spectrum, r0) -> ConjugacySeries:
    """a_k = b_k / r0^k."""
    r0 = _check_radius(r0, "r0")
    inv = 1 / r0
    return ConjugacySeries(r0, K.geometric_scale(np.array(spec.coeffs), *inv.parts))


def _coefficients(series: Union[ConjugacySeries, Spectrum]) -> np.ndarray:
    return np.array(series.a if isinstance(series, ConjugacySeries) else series.coeffs)


def curve_points(series: Union[ConjugacySeries, Spectrum], r, theta) -> np.ndarray:
    """sum_k c_k r^k e^{i 2 pi k theta_j} for packed turns ``theta`` (M, 2)."""
    r = _check_radius(r)
    scaled = K.geometric_scale(_coefficients(series), *r.parts)
    return K.horner(scaled, np.ascontiguousarray(theta, dtype=float))


def evaluate_curve(series: Union[ConjugacySeries, Spectrum], r, theta) -> XComplex:
    """h(r e^{i 2 pi theta}) from the stored coefficients.

    For a Spectrum the coefficients are b_k, so r is measured in units of R0.
    """
    t = frac(_xr(theta))
    return unpack_complex(curve_points(series, r, np.array([t.parts]))[0])


def sample_curve(series, r, n_theta: int) -> np.ndarray:
    """The curve at theta_j = j / n_theta, j < n_theta."""
    theta = np.zeros((n_theta, 2))
    for j in range(n_theta):
        theta[j] = (XReal(j) / n_theta).parts
    return curve_points(series, r, theta)


def reconstruct_trajectory(spec: Spectrum, n: int) -> np.ndarray:
    """z_hat_n = sum_k b_k e^{i 2 pi k n rho} for n < ``n``, packed (n, 4)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return K.horner(np.array(spec.coeffs), _phases(spec.rho, n))


def reconstruction_error(traj, spec: Spectrum, component: int = 0) -> float:
    """max_n |z_n - z_hat_n| over the stored orbit."""
    z = traj.component(component) if isinstance(traj, Trajectory) else np.ascontiguousarray(traj)
    d = K.sub_rows(z, reconstruct_trajectory(spec, z.shape[0]))
    return float(np.hypot(d[:, 0] + d[:, 1], d[:, 2] + d[:, 3]).max())


def l2_length_direct(series: ConjugacySeries, r) -> XReal:
    """2 pi (sum_k |k a_k r^k|^2)^{1/2}, the length of the image of the circle of radius r."""
    r = _check_radius(r)
    scaled = K.geometric_scale(_coefficients(series), *r.parts)
    total = unpack_real(K.pairwise_sum(K.k2_abs2(scaled)))
    return TWO_PI * sqrt(total)


def l2_length_bound(c, r) -> XReal:
    """2 pi c [r^2 (1 + r^2) / (1 - r^2)^3]^{1/2}, valid when sup |a_k| <= c."""
    c = _xr(c)
    if not c > 0:
        raise ValueError("c must be positive")
    r = _check_radius(r)
    psi = r * r
    return TWO_PI * c * sqrt(psi * (1 + psi) / (1 - psi) ** 3)


def k2_power_sum(psi, k_max: int) -> XReal:
    """sum_{k=1}^{K} k^2 psi^k in closed form.

    The bracket cancels to about |1 - psi|^3 of its terms, so it is evaluated
    in exact rational arithmetic and rounded once.
    """
    p = _xr(psi).to_fraction()
    if p == 1:
        raise ValueError("psi must differ from 1")
    kk = int(k_max)
    pk = p**kk
    num = p * (1 + p - (kk + 1) ** 2 * pk + (2 * kk * kk + 2 * kk - 1) * pk * p - kk * kk * pk * p * p)
    return XReal(num / (1 - p) ** 3)


def l2_length_constant(c, r, k_max: int) -> XReal:
    """Length for a_k = c (k <= K) from the finite closed form."""
    r = _check_radius(r)
    return TWO_PI * _xr(c) * sqrt(k2_power_sum(r * r, k_max))
