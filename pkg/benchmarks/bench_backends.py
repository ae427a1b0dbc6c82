"""Time the hot kernels under both backends.

Each backend runs in its own interpreter because the choice is fixed at
import time.  The numba timings exclude compilation (one warm-up call).

    python benchmarks/bench_backends.py [--n 200000] [--modes 64] [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from qpbirkhoff import kernels as K
from qpbirkhoff.maps import SiegelMapParams, iterate
from qpbirkhoff.wba import WeightKind, build_weights
from qpbirkhoff.xprec import XReal, golden

n, modes, repeat = map(int, sys.argv[1:4])
params = SiegelMapParams(golden())
rho = np.array(golden().parts)


def orbit():
    return iterate(params, XReal("0.3"), n)


def weights():
    return build_weights(WeightKind.bump(2), n)


traj = orbit()
p = K.phases(n, rho)
terms = K.scale_rows(weights().weights, traj.points)


def lift():
    a, _ = K.angles_about(traj.points[:, 0:2].copy(), traj.points[:, 2:4].copy(), np.zeros(2), np.zeros(2))
    return K.lift(a, float(rho[0]))


def spectrum():
    return K.spectrum(terms, p, 0, modes)


out = {"backend": K.BACKEND}
for name, fn in [("orbit", orbit), ("weights", weights), ("lift", lift), ("spectrum", spectrum)]:
    fn()
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    out[name] = best
print(json.dumps(out))
"""


def run(backend: str, n: int, modes: int, repeat: int) -> dict:
    env = dict(os.environ, QPBIRKHOFF_BACKEND=backend)
    res = subprocess.run(
        [sys.executable, "-c", WORKER, str(n), str(modes), str(repeat)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(res.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000, help="orbit length")
    ap.add_argument("--modes", type=int, default=64, help="Fourier modes in the spectrum kernel")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    rows = {b: run(b, args.n, args.modes, args.repeat) for b in ("numba", "numpy")}
    if rows["numba"]["backend"] != "numba":
        print("numba is not importable; both rows use numpy", file=sys.stderr)
    print(f"N = {args.n}, modes = {args.modes}, best of {args.repeat}")
    print(f"{'kernel':<10}{'numba s':>12}{'numpy s':>12}{'speedup':>10}")
    for name in ("orbit", "weights", "lift", "spectrum"):
        a, b = rows["numba"][name], rows["numpy"][name]
        print(f"{name:<10}{a:>12.4f}{b:>12.4f}{b / a:>9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
