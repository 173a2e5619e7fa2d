"""The d-regular proximity graph on a discretized flat torus.

Grid vertices are the points (i/n, j/m) in affine coordinates.  Splitting each
little grid parallelogram along its short diagonal triangulates the torus; every
point of the torus lies within the triangle circumradius r of some vertex.  Two
vertices are joined by an edge when their torus distance lies in [1-2r, 1+2r]:
any two unit-distance points of the torus then land in circumdisks whose center
vertices are adjacent, so an independent set in the graph yields a 1-avoiding
union of Voronoi cells.

Because the vertex set is shift-invariant, the whole edge set is determined by
the neighbors of vertex (0,0) - a set of (s, t) offsets - and can be built with
exactly n*m metric evaluations.  `naive_build_graph` is the all-pairs oracle
used to validate that construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import BinaryIO

import numpy as np

from .torus import FlatTorus, displacement_norms, is_perfectly_periodic

__all__ = [
    "GridSpec",
    "TorusGraph",
    "circumradius",
    "build_graph",
    "naive_build_graph",
    "neighbors",
    "export_dimacs",
    "export_edge_list",
    "vertex_index",
    "vertex_ij",
]


@dataclass(frozen=True)
class GridSpec:
    """A torus together with grid subdivision counts n (along v1) and m (along v2)."""

    torus: FlatTorus
    n: int
    m: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1:
            raise ValueError(f"grid sizes must be >= 1, got n={self.n}, m={self.m}")

    @property
    def num_vertices(self) -> int:
        return self.n * self.m


@dataclass(frozen=True)
class TorusGraph:
    """Shift-invariant graph: adjacency of every vertex is `offsets` translated to it.

    offsets is a sorted tuple of (s, t) pairs with s in [0, n), t in [0, m); the
    neighbors of vertex (i, j) are ((i+s) mod n, (j+t) mod m) for each offset.
    """

    spec: GridSpec
    r: float
    offsets: tuple[tuple[int, int], ...]

    @property
    def degree(self) -> int:
        return len(self.offsets)

    @property
    def num_vertices(self) -> int:
        return self.spec.num_vertices

    def offset_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Offsets as parallel int64 arrays (s-components, t-components)."""
        oi = np.array([s for s, _ in self.offsets], dtype=np.int64)
        oj = np.array([t for _, t in self.offsets], dtype=np.int64)
        return oi, oj

    def offset_mask(self) -> np.ndarray:
        """Flat uint8 lookup: mask[s * m + t] == 1 iff (s, t) is an offset."""
        mask = np.zeros(self.num_vertices, dtype=np.uint8)
        for s, t in self.offsets:
            mask[s * self.spec.m + t] = 1
        return mask


def vertex_index(i: int, j: int, m: int) -> int:
    return i * m + j


def vertex_ij(v: int, m: int) -> tuple[int, int]:
    return divmod(v, m)


def circumradius(spec: GridSpec) -> float:
    """Circumradius of the grid triangles (half the short diagonal over sin alpha)."""
    t = spec.torus
    a = t.l1 / spec.n
    b = t.l2 / spec.m
    c = math.sqrt(a * a + b * b - 2.0 * a * b * math.cos(t.alpha))
    return c / (2.0 * math.sin(t.alpha))


def _check_hypotheses(spec: GridSpec, r: float) -> None:
    if not is_perfectly_periodic(spec.torus):
        raise ValueError(
            f"torus ({spec.torus.l1}, {spec.torus.l2}, {spec.torus.alpha}) "
            "is not perfectly periodic"
        )
    if not 2.0 * r < 1.0:
        raise ValueError(
            f"circumradius hypothesis violated: 2r = {2.0 * r:.17g} >= 1 "
            f"(n={spec.n}, m={spec.m} too coarse)"
        )


def _offsets_from_mask(sel: np.ndarray, n: int, m: int) -> tuple[tuple[int, int], ...]:
    idx = np.flatnonzero(sel)
    return tuple((int(v) // m, int(v) % m) for v in idx)


def build_graph(spec: GridSpec) -> TorusGraph:
    """Build the graph from n*m metric evaluations of the (0,0)-row displacements.

    Edge rule: torus distance in the closed interval [1-2r, 1+2r], compared in
    raw floating point.  Requires a perfectly periodic torus and 2r < 1.
    """
    r = circumradius(spec)
    _check_hypotheses(spec, r)
    n, m = spec.n, spec.m
    s = np.repeat(np.arange(n), m)
    t = np.tile(np.arange(m), n)
    d = displacement_norms(spec.torus, s / n, t / m)
    sel = (d >= 1.0 - 2.0 * r) & (d <= 1.0 + 2.0 * r)
    sel[0] = False
    return TorusGraph(spec=spec, r=r, offsets=_offsets_from_mask(sel, n, m))


def naive_build_graph(spec: GridSpec) -> TorusGraph:
    """All-pairs oracle: same contract as build_graph, O((nm)^2) distance checks.

    Also verifies shift invariance: every vertex's neighbor-displacement set must
    equal the (0,0) row.  Test-scale only.
    """
    r = circumradius(spec)
    _check_hypotheses(spec, r)
    n, m = spec.n, spec.m
    nm = n * m
    if nm > 10_000:
        raise ValueError(f"naive construction capped at 10000 vertices, got {nm}")
    lo, hi = 1.0 - 2.0 * r, 1.0 + 2.0 * r
    i = np.repeat(np.arange(n), m)
    j = np.tile(np.arange(m), n)
    base = None
    for v in range(nm):
        d = displacement_norms(spec.torus, (i - i[v]) / n, (j - j[v]) / m)
        sel = (d >= lo) & (d <= hi)
        sel[v] = False
        # displacement set relative to v, expressed as offsets from (0,0)
        row = np.zeros(nm, dtype=bool)
        row[((i - i[v]) % n) * m + ((j - j[v]) % m)] = sel
        if base is None:
            base = row
        elif not np.array_equal(row, base):
            raise AssertionError(f"shift invariance violated at vertex {v}")
    return TorusGraph(spec=spec, r=r, offsets=_offsets_from_mask(base, n, m))


def neighbors(g: TorusGraph, v: int) -> list[int]:
    """Neighbor vertex ids of v, in offset order; length equals g.degree."""
    n, m = g.spec.n, g.spec.m
    if not 0 <= v < n * m:
        raise ValueError(f"vertex {v} out of range for {n}x{m} grid")
    i, j = divmod(v, m)
    return [((i + s) % n) * m + (j + t) % m for s, t in g.offsets]


def export_dimacs(g: TorusGraph, sink: BinaryIO) -> None:
    """Write the graph in DIMACS edge format with 1-based vertex ids.

    Header `p edge <nm> <edges>`, then one `e u v` line per undirected edge with
    u < v, ascending.  Deterministic for a fixed graph.
    """
    nm = g.num_vertices
    edges = nm * g.degree // 2
    sink.write(f"p edge {nm} {edges}\n".encode("ascii"))
    for u in range(nm):
        row = [v for v in neighbors(g, u) if v > u]
        for v in sorted(row):
            sink.write(f"e {u + 1} {v + 1}\n".encode("ascii"))


def export_edge_list(g: TorusGraph, sink: BinaryIO) -> None:
    """Write one `u v` pair per undirected edge, 0-based, ascending."""
    for u in range(g.num_vertices):
        for v in sorted(w for w in neighbors(g, u) if w > u):
            sink.write(f"{u} {v}\n".encode("ascii"))
