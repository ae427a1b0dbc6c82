"""Hot kernels for the active backend (see ``_backend``)."""

from ._backend import BACKEND, USE_NUMBA

if USE_NUMBA:
    from ._kernels_numba import *  # noqa: F403
    from ._kernels_numba import WEIGHT_CUTOFF
else:
    from ._kernels_numpy import *  # noqa: F403
    from ._kernels_numpy import WEIGHT_CUTOFF

__all__ = [
    "BACKEND",
    "WEIGHT_CUTOFF",
    "raw_weights",
    "pairwise_sum",
    "scale_rows",
    "weighted_sum",
    "divide_rows",
    "siegel_orbit",
    "henon_orbit",
    "angles_about",
    "radii",
    "lift",
    "phases",
    "unit_phasors",
    "spectrum",
    "horner",
    "geometric_scale",
    "k2_abs2",
    "sub_rows",
]
