import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from qpbirkhoff import kernels

PROBE = Path(__file__).with_name("_backend_probe.py")


def probe(tmp_path, backend):
    out = tmp_path / f"{backend}.npz"
    env = dict(os.environ, QPBIRKHOFF_BACKEND=backend)
    subprocess.run([sys.executable, str(PROBE), str(out)], env=env, check=True)
    return np.load(out)


@pytest.fixture(scope="module")
def both(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("backends")
    return probe(tmp, "numba"), probe(tmp, "numpy")


def test_backend_names(both):
    fast, slow = both
    assert str(slow["backend"]) == "numpy"
    assert str(fast["backend"]) == ("numba" if kernels.USE_NUMBA else "numpy")


@pytest.mark.parametrize("key", ["orbit", "henon", "weights", "rate", "phasors", "spectrum"])
def test_backends_agree(both, key):
    fast, slow = both
    a, b = fast[key], slow[key]
    assert a.shape == b.shape
    # pairs are compared as hi + lo so that a renormalization difference
    # does not count as a disagreement
    d = (a[..., 0::2] - b[..., 0::2]) + (a[..., 1::2] - b[..., 1::2])
    assert np.abs(d).max() <= 1e-31
