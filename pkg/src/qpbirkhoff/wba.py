"""Weighted Birkhoff averages.

The weighted average of samples f_0..f_{N-1} is sum_n w(n/N) f_n / sum_j w(j/N)
with a C-infinity bump w vanishing to all orders at 0 and 1.  For smooth
observables along a Diophantine quasiperiodic orbit the error decays faster
than any power of N; the uniform weight gives the plain Birkhoff mean.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from . import kernels as K
from .xprec import XComplex, XReal, exp, unpack_complex, unpack_real

_CODES = {"uniform": 0, "bump": 1, "iterated": 2}


@dataclass(frozen=True)
class WeightKind:
    """Uniform, Bump(p) = exp(-[t(1-t)]^-p), or IteratedBump = exp(-1/Bump(1))."""

    variant: str = "bump"
    p: int = 2

    def __post_init__(self):
        if self.variant not in _CODES:
            raise ValueError(f"unknown weight variant {self.variant!r}")
        if self.variant == "bump" and (int(self.p) != self.p or self.p < 1):
            raise ValueError("bump exponent p must be a positive integer")

    @classmethod
    def uniform(cls) -> "WeightKind":
        return cls("uniform", 0)

    @classmethod
    def bump(cls, p: int = 2) -> "WeightKind":
        return cls("bump", p)

    @classmethod
    def iterated(cls) -> "WeightKind":
        return cls("iterated", 1)

    @classmethod
    def parse(cls, text: str) -> "WeightKind":
        """'uniform', 'bump1', 'bump2', ..., 'iterated'."""
        t = text.strip().lower()
        if t == "uniform":
            return cls.uniform()
        if t in ("iterated", "iteratedbump"):
            return cls.iterated()
        if t.startswith("bump"):
            digits = t[4:].strip("()[]") or "2"
            return cls.bump(int(digits))
        raise ValueError(f"unknown weight kind {text!r}")

    @property
    def code(self) -> int:
        return _CODES[self.variant]

    def __str__(self):
        if self.variant == "bump":
            return f"bump{self.p}"
        return self.variant


def default_kind(target_digits: int = 30) -> WeightKind:
    """Bump(1) is quicker up to ~10 digits; beyond that Bump(2) wins."""
    return WeightKind.bump(1 if target_digits <= 10 else 2)


def weight_raw(kind: WeightKind, t) -> XReal:
    """Unnormalized weight at t."""
    t = t if isinstance(t, XReal) else XReal(t)
    if kind.variant == "uniform":
        return XReal(1) if 0 <= t < 1 else XReal(0)
    if not (0 < t < 1):
        return XReal(0)
    u = t * (1 - t)
    if kind.variant == "bump":
        arg = 1 / u**kind.p
    else:
        a1 = 1 / u
        if a1.hi > 700.0:
            return XReal(0)
        arg = exp(a1)
    if arg.hi > K.WEIGHT_CUTOFF:
        return XReal(0)
    return exp(-arg)


@dataclass(frozen=True, eq=False)
class WeightTable:
    kind: WeightKind
    n_total: int
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.weights.flags.writeable = False

    def __len__(self):
        return self.n_total

    def __getitem__(self, n: int) -> XReal:
        return unpack_real(self.weights[n])

    def total(self) -> XReal:
        return unpack_real(K.pairwise_sum(self.weights))


def build_weights(kind: WeightKind, n_total: int) -> WeightTable:
    if n_total < 2:
        raise ValueError("need at least 2 samples for a weight table")
    raw = K.raw_weights(kind.code, int(kind.p), int(n_total))
    s = K.pairwise_sum(raw)
    return WeightTable(kind, int(n_total), K.divide_rows(raw, s[0], s[1]))


Samples = Union[np.ndarray, Sequence[XComplex], Sequence[XReal]]


def as_packed(samples: Samples) -> np.ndarray:
    """Packed (N, 2) or (N, 4) float array for a sample sequence."""
    if isinstance(samples, np.ndarray):
        if samples.ndim != 2 or samples.shape[1] not in (2, 4):
            raise ValueError("packed samples must have shape (N, 2) or (N, 4)")
        return np.ascontiguousarray(samples, dtype=float)
    items = list(samples)
    if items and all(isinstance(s, XReal) for s in items):
        return np.array([s.parts for s in items], dtype=float).reshape(-1, 2)
    out = np.empty((len(items), 4))
    for i, s in enumerate(items):
        out[i] = (s if isinstance(s, XComplex) else XComplex(s)).parts
    return out


def _unpack(row: np.ndarray):
    return unpack_real(row) if row.shape[0] == 2 else unpack_complex(row)


def wb_average(samples: Samples, table: WeightTable):
    """Weighted sum of the samples; XReal for real samples, XComplex otherwise."""
    packed = as_packed(samples)
    if packed.shape[0] != table.n_total:
        raise ValueError(
            f"{packed.shape[0]} samples but the weight table has {table.n_total}"
        )
    return _unpack(K.weighted_sum(table.weights, packed))


def birkhoff_average(samples: Samples):
    """Plain mean (uniform weights)."""
    packed = as_packed(samples)
    return wb_average(packed, build_weights(WeightKind.uniform(), packed.shape[0]))


def convergence_profile(
    sample_source: Union[Callable[[int], object], Samples],
    kind: WeightKind,
    checkpoints: Iterable[int],
) -> list[tuple[int, object]]:
    """Weighted averages over the first N samples for each checkpoint N.

    Each checkpoint gets its own table, since the normalized weights depend
    on N globally.
    """
    cps = [int(c) for c in checkpoints]
    if not cps:
        raise ValueError("no checkpoints given")
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise ValueError("checkpoints must be strictly increasing")
    if callable(sample_source):
        packed = as_packed([sample_source(n) for n in range(cps[-1])])
    else:
        packed = as_packed(sample_source)
    if packed.shape[0] < cps[-1]:
        raise ValueError(f"only {packed.shape[0]} samples for checkpoint {cps[-1]}")
    return [(n, wb_average(packed[:n], build_weights(kind, n))) for n in cps]
