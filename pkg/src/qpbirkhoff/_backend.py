"""Backend selection for the hot kernels.

``QPBIRKHOFF_BACKEND=numpy`` forces the pure-numpy path; anything else uses
numba when it is importable.  The choice is fixed at import time.
"""

import os
import warnings

# the bundled TBB is too old; numba falls back to another layer on its own
warnings.filterwarnings("ignore", message="The TBB threading layer")

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

BACKEND_ENV = "QPBIRKHOFF_BACKEND"

_requested = os.environ.get(BACKEND_ENV, "numba").strip().lower()
USE_NUMBA = numba is not None and _requested != "numpy"
BACKEND = "numba" if USE_NUMBA else "numpy"


def jit(fn):
    """njit ``fn`` under the numba backend, return it untouched otherwise.

    Functions passed through here must be branch-free so that the untouched
    version also works elementwise on numpy arrays.
    """
    if USE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn
