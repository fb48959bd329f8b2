"""Configurations, metrics, bounded sampling and interpolation.

Configs are plain float64 numpy vectors. Joint angles are treated as bounded
reals without wrap-around.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class InvalidArgument(ValueError):
    """Bad input: wrong shape, out-of-range parameter, colliding endpoint."""


class Metric(str, enum.Enum):
    L2 = "L2"
    LINF = "Linf"

    @classmethod
    def parse(cls, value) -> "Metric":
        if isinstance(value, Metric):
            return value
        key = str(value).strip().lower()
        for m in cls:
            if m.value.lower() == key:
                return m
        raise InvalidArgument(f"unknown metric {value!r}")


def as_config(q, dim: int | None = None) -> np.ndarray:
    """Coerce ``q`` to a finite float64 vector, optionally of length ``dim``."""
    a = np.asarray(q, dtype=np.float64)
    if a.ndim != 1:
        raise InvalidArgument(f"config must be a vector, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise InvalidArgument(f"config has length {a.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(a)):
        raise InvalidArgument("config has non-finite coordinates")
    return a


def distance(metric: Metric, a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise InvalidArgument(f"dimension mismatch: {a.shape} vs {b.shape}")
    d = a - b
    if metric is Metric.LINF:
        return float(np.abs(d).max()) if d.size else 0.0
    return math.hypot(*d.tolist())


@dataclass(frozen=True)
class Bounds:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=np.float64)
        hi = np.asarray(self.upper, dtype=np.float64)
        if lo.ndim != 1 or lo.shape != hi.shape:
            raise InvalidArgument("bounds lower/upper must be vectors of equal length")
        if not np.all(lo < hi):
            raise InvalidArgument("bounds require lower < upper in every coordinate")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(self.upper - self.lower))

    def contains(self, q) -> bool:
        q = np.asarray(q)
        return bool(np.all(q >= self.lower) and np.all(q <= self.upper))

    def contains_all(self, qs: np.ndarray) -> np.ndarray:
        return np.all((qs >= self.lower) & (qs <= self.upper), axis=1)

    def margin(self, q) -> float:
        """Distance from ``q`` to the nearest face of the box (either metric)."""
        q = np.asarray(q)
        return float(min((q - self.lower).min(), (self.upper - q).min()))

    def __eq__(self, other):
        return (
            isinstance(other, Bounds)
            and np.array_equal(self.lower, other.lower)
            and np.array_equal(self.upper, other.upper)
        )

    def __hash__(self):
        return hash((self.lower.tobytes(), self.upper.tobytes()))


class Rng:
    """Seeded PCG64 stream; the same seed gives the same draws on any platform.

    Uniform draws are pulled from numpy's ``Generator.random`` in fixed-size
    blocks, so the sequence depends only on the seed and the dimension.
    """

    BLOCK = 1024

    def __init__(self, seed: int):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise InvalidArgument("seed must be a 64-bit unsigned integer")
        self.seed = seed
        self._gen = np.random.Generator(np.random.PCG64(seed))
        self._buf = np.empty((0, 0))
        self._pos = 0

    def random(self, dim: int) -> np.ndarray:
        """One point uniform on [0, 1)^dim."""
        if self._pos >= self._buf.shape[0] or self._buf.shape[1] != dim:
            self._buf = self._gen.random((self.BLOCK, dim))
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return u


def sample_uniform(rng: Rng, bounds: Bounds) -> np.ndarray:
    u = rng.random(bounds.dim)
    return bounds.lower + u * (bounds.upper - bounds.lower)


def interpolate(a, b, s: float) -> np.ndarray:
    if not 0.0 <= s <= 1.0:
        raise InvalidArgument(f"interpolation parameter {s} outside [0, 1]")
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise InvalidArgument(f"dimension mismatch: {a.shape} vs {b.shape}")
    if s == 1.0:
        return b.copy()
    return a + s * (b - a)
