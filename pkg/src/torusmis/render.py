"""SVG rendering of solved instances: Voronoi cells of the torus grid.

Every grid point owns a hexagonal (rectangular when alpha = pi/2) Voronoi
cell; a drawing is the full parallelogram tile with independent-set cells
filled dark.  Cells straddling the parallelogram boundary are wrapped: the
parts sticking out re-enter on the opposite side, so the image tiles the
plane seamlessly exactly as the torus does.

All geometry is computed in lattice-coefficient space (the parallelogram is
the unit square there), converted to plane pixels only at emission time.
Output bytes are deterministic for fixed inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import BinaryIO

from .grid_graph import GridSpec, circumradius
from .mis import IndependentSet

_AREA_EPS = 1e-12


@dataclass(frozen=True)
class RenderStyle:
    cell_fill_in_set: str = "#27408b"
    cell_fill_out: str = "#e8e8e8"
    stroke_width: float = 1.0
    canvas_width: int = 800

    def __post_init__(self) -> None:
        if self.canvas_width < 64:
            raise ValueError(f"canvas_width must be >= 64, got {self.canvas_width}")
        if self.stroke_width < 0:
            raise ValueError(f"stroke_width must be >= 0, got {self.stroke_width}")


def _step_vectors(spec: GridSpec) -> tuple[tuple[float, float], tuple[float, float]]:
    t = spec.torus
    a = t.l1 / spec.n
    b = t.l2 / spec.m
    return (a, 0.0), (b * math.cos(t.alpha), b * math.sin(t.alpha))


def _clip_halfplane(
    poly: list[tuple[float, float]], dx: float, dy: float, c: float
) -> list[tuple[float, float]]:
    """Keep the part of a convex polygon with x*dx + y*dy <= c."""
    out: list[tuple[float, float]] = []
    for k in range(len(poly)):
        px, py = poly[k]
        qx, qy = poly[(k + 1) % len(poly)]
        p_in = px * dx + py * dy <= c
        q_in = qx * dx + qy * dy <= c
        if p_in:
            out.append((px, py))
        if p_in != q_in:
            denom = (qx - px) * dx + (qy - py) * dy
            s = (c - (px * dx + py * dy)) / denom
            out.append((px + s * (qx - px), py + s * (qy - py)))
    return out


def _dedupe(poly: list[tuple[float, float]], eps: float) -> list[tuple[float, float]]:
    out: list[tuple[float, float]] = []
    for p in poly:
        if not out or math.hypot(p[0] - out[-1][0], p[1] - out[-1][1]) > eps:
            out.append(p)
    if len(out) > 1 and math.hypot(out[0][0] - out[-1][0], out[0][1] - out[-1][1]) <= eps:
        out.pop()
    return out


def _polygon_area(poly: list[tuple[float, float]]) -> float:
    total = 0.0
    for k in range(len(poly)):
        px, py = poly[k]
        qx, qy = poly[(k + 1) % len(poly)]
        total += px * qy - qx * py
    return 0.5 * total


def _reduced_basis(
    u: tuple[float, float], v: tuple[float, float]
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Lagrange-reduce a lattice basis and flip so the pair is non-acute.

    The perpendicular bisectors toward a basis pair and its short diagonal
    bound the true Voronoi cell only when the basis is reduced; strongly
    skewed discretizations (very different step lengths at a small angle)
    need reduction first or the six half-planes overestimate the cell.
    """
    for _ in range(64):
        if u[0] * u[0] + u[1] * u[1] > v[0] * v[0] + v[1] * v[1]:
            u, v = v, u
        mu = round((u[0] * v[0] + u[1] * v[1]) / (u[0] * u[0] + u[1] * u[1]))
        if mu == 0:
            break
        v = (v[0] - mu * u[0], v[1] - mu * u[1])
    if u[0] * v[0] + u[1] * v[1] > 0:
        v = (-v[0], -v[1])
    return u, v


def hexagon_cell(spec: GridSpec, v: int) -> list[tuple[float, float]]:
    """Voronoi cell of grid point v in plane coordinates, <= 6 vertices.

    The cell is the intersection of the half-planes bounded by perpendicular
    bisectors toward the six nearest lattice directions (the reduced step
    basis, its negations, and the short diagonal); for alpha = pi/2 two
    bisectors pass exactly through the rectangle corners and the cell
    degenerates to 4 vertices.
    """
    if not 0 <= v < spec.num_vertices:
        raise ValueError(f"vertex {v} outside grid of {spec.num_vertices}")
    r = circumradius(spec)
    if not 2.0 * r < 1.0:
        raise ValueError(f"circumradius hypothesis violated: 2r = {2.0 * r:.6g} >= 1")
    e1, e2 = _step_vectors(spec)
    bu, bv = _reduced_basis(e1, e2)
    reach = 2.0 * (math.hypot(*bu) + math.hypot(*bv))
    poly = [(-reach, -reach), (reach, -reach), (reach, reach), (-reach, reach)]
    for dx, dy in (
        bu,
        (-bu[0], -bu[1]),
        bv,
        (-bv[0], -bv[1]),
        (bu[0] + bv[0], bu[1] + bv[1]),
        (-bu[0] - bv[0], -bu[1] - bv[1]),
    ):
        poly = _clip_halfplane(poly, dx, dy, 0.5 * (dx * dx + dy * dy))
    poly = _dedupe(poly, 1e-9 * math.hypot(*bv))
    i, j = divmod(v, spec.m)
    cx = i * e1[0] + j * e2[0]
    cy = j * e2[1]
    return [(x + cx, y + cy) for x, y in poly]


def _cell_pieces_unit(
    base_st: list[tuple[float, float]], s0: float, t0: float
) -> list[list[tuple[float, float]]]:
    """Wrapped cell pieces inside the unit square, lattice coordinates."""
    pieces = []
    for ds in (-1, 0, 1):
        for dt in (-1, 0, 1):
            poly = [(s + s0 + ds, t + t0 + dt) for s, t in base_st]
            poly = _clip_halfplane(poly, -1.0, 0.0, 0.0)
            if poly:
                poly = _clip_halfplane(poly, 1.0, 0.0, 1.0)
            if poly:
                poly = _clip_halfplane(poly, 0.0, -1.0, 0.0)
            if poly:
                poly = _clip_halfplane(poly, 0.0, 1.0, 1.0)
            if poly and abs(_polygon_area(poly)) > _AREA_EPS:
                pieces.append(poly)
    return pieces


def render_solution(
    spec: GridSpec, s: IndependentSet, style: RenderStyle, sink: BinaryIO
) -> None:
    """Write the solved tile as an SVG document: one path per cell, members
    filled with style.cell_fill_in_set, wrapped cells drawn as split paths."""
    n, m = spec.n, spec.m
    if (s.n, s.m) != (n, m):
        raise ValueError(f"solution is {s.n}x{s.m}, spec is {n}x{m}")
    t = spec.torus
    e1, e2 = _step_vectors(spec)
    base = hexagon_cell(spec, 0)
    # to lattice coordinates: x = s*v1 + t*v2 with v1, v2 the torus vectors
    det = t.l1 * t.l2 * math.sin(t.alpha)
    v1 = (t.l1, 0.0)
    v2 = (t.l2 * math.cos(t.alpha), t.l2 * math.sin(t.alpha))
    base_st = [
        ((x * v2[1] - y * v2[0]) / det, (y * v1[0] - x * v1[1]) / det) for x, y in base
    ]
    xs = [0.0, v1[0], v2[0], v1[0] + v2[0]]
    ys = [0.0, v1[1], v2[1], v1[1] + v2[1]]
    span_x = max(xs) - min(xs)
    span_y = max(ys) - min(ys)
    px = style.canvas_width / span_x
    width = style.canvas_width
    height = math.ceil(span_y * px)

    def to_pixels(sc: float, tc: float) -> tuple[float, float]:
        x = sc * v1[0] + tc * v2[0]
        y = sc * v1[1] + tc * v2[1]
        return ((x - min(xs)) * px, (max(ys) - y) * px)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">'
    ]
    members = s.membership
    for v in range(n * m):
        i, j = divmod(v, m)
        pieces = _cell_pieces_unit(base_st, i / n, j / m)
        cmds = []
        for piece in pieces:
            pts = [to_pixels(sc, tc) for sc, tc in piece]
            cmds.append(
                "M"
                + "L".join(f"{x:.6f},{y:.6f}" for x, y in pts)
                + "Z"
            )
        fill = style.cell_fill_in_set if members[v] else style.cell_fill_out
        parts.append(
            f'<path d="{"".join(cmds)}" fill="{fill}" stroke="#555555" '
            f'stroke-width="{style.stroke_width:.6g}"/>'
        )
    parts.append("</svg>")
    sink.write("\n".join(parts).encode("ascii"))
