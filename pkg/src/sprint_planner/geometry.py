"""Configuration-space vector math and segment projection helpers.

A configuration is a 1-D float64 numpy array; all functions here are pure
and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

Config = np.ndarray


def as_config(x) -> Config:
    """Coerce to a validated configuration vector (finite, 1-D, nonempty)."""
    q = np.asarray(x, dtype=np.float64)
    if q.ndim != 1 or q.size == 0:
        raise ValueError(f"configuration must be a nonempty 1-D vector, got shape {q.shape}")
    if not np.all(np.isfinite(q)):
        raise ValueError("configuration contains non-finite coordinates")
    return q


def _check_dims(a: Config, b: Config) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")


@dataclass(frozen=True)
class Region:
    """A search-space region marked by two endpoint configurations."""

    a: Config
    b: Config

    def __post_init__(self):
        _check_dims(self.a, self.b)


def dist(a: Config, b: Config) -> float:
    """Euclidean distance between two configurations."""
    _check_dims(a, b)
    d = a - b
    return math.sqrt(d.dot(d))


def proj_scalar(p: Config, r: Region) -> float:
    """Unclamped parameter t of the orthogonal projection of p onto the line
    through r.a and r.b, so that the projected point is r.a + t*(r.b - r.a)."""
    _check_dims(p, r.a)
    d = r.b - r.a
    denom = float(np.dot(d, d))
    if denom == 0.0:
        raise ValueError("degenerate region: endpoints coincide")
    return float(np.dot(p - r.a, d)) / denom


def proj(p: Config, r: Region) -> Config:
    """Orthogonal projection of p onto the infinite line through r.a and r.b."""
    t = proj_scalar(p, r)
    return r.a + t * (r.b - r.a)


def hvs(x: float) -> float:
    """Heaviside step; the value at exactly 0 is 1."""
    return 0.0 if x < 0.0 else 1.0


def as_polyline(points) -> np.ndarray:
    """Coerce to an (n, d) polyline array, n >= 2, consecutive points distinct."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise ValueError(f"polyline needs >= 2 points, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("polyline contains non-finite coordinates")
    seg = np.diff(pts, axis=0)
    if np.any(np.all(seg == 0.0, axis=1)):
        raise ValueError("polyline has consecutive duplicate points")
    return pts


def polyline_length(points) -> float:
    """Total length of a piecewise-linear path given as an (n, d) array."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise ValueError(f"polyline needs >= 2 points, got shape {pts.shape}")
    return float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))


def unit(v: Config) -> Config:
    """v normalized to unit length; raises on the zero vector."""
    n = math.sqrt(v.dot(v))
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return v / n
