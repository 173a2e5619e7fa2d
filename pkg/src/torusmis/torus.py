"""Flat-torus geometry: parameters, points, and the shortest-representative metric.

A torus T(l1, l2, alpha) is the quotient of the plane by the lattice spanned by
v1 = (l1, 0) and v2 = (l2 cos alpha, l2 sin alpha).  Points are written in affine
coordinates (x, y) in [0,1)^2, meaning the plane point x*v1 + y*v2.  The metric
between two torus points is the minimum Euclidean length of any lattice
representative of their difference; a finite search over a small window of lattice
shifts suffices, which is what `metric` implements and `metric_oracle`
cross-checks by brute force.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "FlatTorus",
    "TorusPoint",
    "metric",
    "metric_oracle",
    "is_perfectly_periodic",
    "displacement_norms",
]


@dataclass(frozen=True)
class FlatTorus:
    """Torus parameters: side lengths l1, l2 and basis angle alpha in (0, pi/2]."""

    l1: float
    l2: float
    alpha: float

    def __post_init__(self) -> None:
        if not (self.l1 > 0 and self.l2 > 0):
            raise ValueError(f"side lengths must be positive, got {self.l1}, {self.l2}")
        if not (0 < self.alpha <= math.pi / 2):
            raise ValueError(f"alpha must lie in (0, pi/2], got {self.alpha}")

    @property
    def area(self) -> float:
        return self.l1 * self.l2 * math.sin(self.alpha)


@dataclass(frozen=True)
class TorusPoint:
    """A point in affine coordinates, canonicalized into [0,1)^2."""

    x: float
    y: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", self.x % 1.0)
        object.__setattr__(self, "y", self.y % 1.0)

    def shifted(self, dx: float, dy: float) -> "TorusPoint":
        return TorusPoint(self.x + dx, self.y + dy)


def _search_window(alpha: float) -> int:
    """Size of the shift window that provably contains the minimizer."""
    c = math.cos(alpha)
    return math.ceil(1.0 / (1.0 - c * c)) + 1


def displacement_norms(t: FlatTorus, dx: np.ndarray, dy: np.ndarray) -> np.ndarray:
    """Torus distances for arrays of affine displacements.

    Vectorized core shared by the scalar metric and the graph builder so both
    paths are bitwise identical.  dx, dy are coefficient differences; any reals
    are accepted (the search covers all residues).
    """
    l1, l2, alpha = t.l1, t.l2, t.alpha
    dx = np.asarray(dx, dtype=np.float64).ravel()
    dy = np.asarray(dy, dtype=np.float64).ravel()
    if l1 > l2:
        l1, l2 = l2, l1
        dx, dy = dy, dx
    cos_a = math.cos(alpha)
    k = _search_window(alpha)
    shifts = np.arange(-k, k + 1, dtype=np.float64)
    b = dy[:, None] + shifts[None, :]
    f = -(dx[:, None] + b * (l2 * cos_a / l1))
    best = np.full(dx.shape[0], np.inf)
    for a_cand in (np.floor(f), np.ceil(f)):
        a = dx[:, None] + a_cand
        g = (l1 * a) ** 2 + (l2 * b) ** 2 + 2.0 * a * b * (l1 * l2 * cos_a)
        best = np.minimum(best, g.min(axis=1))
    return np.sqrt(np.maximum(best, 0.0))


def metric(t: FlatTorus, p1: TorusPoint, p2: TorusPoint) -> float:
    """Distance between two torus points via the finite shift search."""
    d = displacement_norms(t, np.array([p2.x - p1.x]), np.array([p2.y - p1.y]))
    return float(d[0])


def metric_oracle(t: FlatTorus, p1: TorusPoint, p2: TorusPoint, window: int) -> float:
    """Exhaustive minimum over all shifts in [-window, window]^2.  Test oracle.

    Correct whenever window is at least the provable bound for t (callers use
    window >= _search_window(t.alpha) + a margin).
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    l1, l2, alpha = t.l1, t.l2, t.alpha
    cos_a = math.cos(alpha)
    dx = p2.x - p1.x
    dy = p2.y - p1.y
    shifts = np.arange(-window, window + 1, dtype=np.float64)
    a = dx + shifts[:, None]
    b = dy + shifts[None, :]
    g = (l1 * a) ** 2 + (l2 * b) ** 2 + 2.0 * a * b * (l1 * l2 * cos_a)
    return float(math.sqrt(max(g.min(), 0.0)))


def is_perfectly_periodic(t: FlatTorus) -> bool:
    """Sufficient condition for the torus to wrap no short geodesics.

    Raw floating-point comparisons on purpose: the dataset boundary behavior
    (which parameter combinations are admitted) is defined by binary float
    arithmetic, e.g. 4.0 * sin(pi/6) evaluates to 1.9999999999999998 < 2.
    """
    s = math.sin(t.alpha)
    return (t.l1 >= 2 and t.l2 * s >= 2) or (t.l2 >= 2 and t.l1 * s >= 2)
