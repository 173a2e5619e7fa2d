"""Closed-form density of the disc-and-hexagon ("tortoise") packing baseline.

Place a disc of radius 1/2 inside an open regular hexagon of height x (distance
between opposite sides), repeat the intersection shape over a triangular lattice
with basis length 1 + x.  The shape has diameter below 1 and distinct copies are
more than 1 apart, so the packing avoids unit distances; its density is a
classical lower bound for the plane and the reference line for solver quality.

The tortoise area is the disc minus the six circular segments cut off by the
hexagon sides: pi/4 - 6*(R^2*arccos(d/R) - d*sqrt(R^2 - d^2)) with R = 1/2 and
d = x/2.  Valid for x above sqrt(3)/2, where adjacent segments do not overlap.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "X_DOMAIN",
    "croft_area",
    "croft_density",
    "croft_density_mc",
    "croft_optimum",
    "disc_packing_density",
]

X_DOMAIN = (math.sqrt(3) / 2, 1.0)

_R = 0.5


def _check_domain(x: float) -> None:
    lo, hi = X_DOMAIN
    if not (lo < x < hi):
        raise ValueError(f"hexagon height must lie in ({lo}, {hi}), got {x}")


def croft_area(x: float) -> float:
    """Area of the disc of radius 1/2 clipped by a hexagon of height x."""
    _check_domain(x)
    d = x / 2.0
    segment = _R * _R * math.acos(d / _R) - d * math.sqrt(_R * _R - d * d)
    return math.pi * _R * _R - 6.0 * segment


def croft_density(x: float) -> float:
    """Packing density: tortoise area over the lattice cell area (1+x)^2 sin(pi/3)."""
    return croft_area(x) / ((1.0 + x) ** 2 * math.sin(math.pi / 3))


def croft_density_mc(x: float, samples: int = 10_000_000, seed: int = 0) -> tuple[float, float]:
    """Monte-Carlo density estimate and its standard error.  Validation oracle.

    Samples the bounding square of the disc; a point is inside the tortoise when
    it is inside the disc and all three hexagon half-plane pairs |p . u| <= x/2.
    """
    _check_domain(x)
    rng = np.random.default_rng(seed)
    half = math.sqrt(3) / 2
    dirs = np.array([[1.0, 0.0], [0.5, half], [-0.5, half]])
    inside = 0
    remaining = samples
    while remaining > 0:
        batch = min(remaining, 2_000_000)
        pts = rng.uniform(-_R, _R, size=(batch, 2))
        ok = (pts * pts).sum(axis=1) <= _R * _R
        proj = np.abs(pts @ dirs.T)
        ok &= (proj <= x / 2.0).all(axis=1)
        inside += int(ok.sum())
        remaining -= batch
    p = inside / samples
    square = 1.0  # (2R)^2
    area = p * square
    se_area = math.sqrt(p * (1.0 - p) / samples) * square
    cell = (1.0 + x) ** 2 * math.sin(math.pi / 3)
    return area / cell, se_area / cell


def croft_optimum() -> tuple[float, float]:
    """Maximize croft_density by golden-section search; returns (x_star, density)."""
    lo = X_DOMAIN[0] + 1e-6
    hi = X_DOMAIN[1] - 1e-9
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = croft_density(c), croft_density(d)
    while b - a > 1e-7:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = croft_density(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = croft_density(d)
    x_star = (a + b) / 2.0
    return x_star, croft_density(x_star)


def disc_packing_density() -> float:
    """Density of the plain disc packing, pi / (8 sqrt(3)): the x -> 1 limit."""
    return math.pi / (8.0 * math.sqrt(3))
