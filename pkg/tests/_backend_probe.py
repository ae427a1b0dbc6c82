"""Runs a fixed workload through the active kernel backend and saves the results."""

import sys

import numpy as np

from qpbirkhoff import kernels as K
from qpbirkhoff.maps import HenonParams, SiegelMapParams, iterate
from qpbirkhoff.rotation import ComplexComponent, ProjectionSpec, rotation_rate
from qpbirkhoff.wba import WeightKind, build_weights
from qpbirkhoff.xprec import XComplex, XReal, frac, golden

orbit = iterate(SiegelMapParams(golden()), XReal("0.3"), 4000)
henon = iterate(
    HenonParams(XReal("0.664"), XReal("2.032")),
    (XComplex("-0.5", "0.126"), XComplex("-0.387", "-0.163")), 2000,
)
est = rotation_rate(orbit, ProjectionSpec(ComplexComponent(0)), WeightKind.bump(2))
p = K.phases(4000, np.array(frac(golden()).parts))
terms = K.scale_rows(build_weights(WeightKind.bump(2), 4000).weights, orbit.points)
np.savez(
    sys.argv[1],
    backend=np.array(K.BACKEND),
    orbit=orbit.points,
    henon=henon.points,
    weights=build_weights(WeightKind.iterated(), 3000).weights,
    rate=np.array(est.rate.parts),
    phasors=K.unit_phasors(p, -1.0),
    spectrum=K.spectrum(terms, p, 1, 40),
)
