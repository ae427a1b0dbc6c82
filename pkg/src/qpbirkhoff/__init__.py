"""Rotation rates and linearizing conjugacies of quasiperiodic orbits from
trajectory data, using weighted Birkhoff averages in double-double precision.
"""

from .kernels import BACKEND
from .xprec import XComplex, XReal

__all__ = ["BACKEND", "XComplex", "XReal"]
__version__ = "0.1.0"
