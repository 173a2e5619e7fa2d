"""Offset-based graph construction against the all-pairs oracle."""

import io
import math

import numpy as np
import pytest

from torusmis.grid_graph import (
    GridSpec,
    build_graph,
    circumradius,
    export_dimacs,
    export_edge_list,
    naive_build_graph,
    neighbors,
    vertex_ij,
    vertex_index,
)
from torusmis.torus import FlatTorus, TorusPoint, metric


def random_periodic_spec(rng, max_vertices=400):
    while True:
        t = FlatTorus(
            l1=rng.uniform(2.0, 6.0),
            l2=rng.uniform(2.0, 6.0),
            alpha=rng.uniform(math.pi / 9, math.pi / 2),
        )
        s = math.sin(t.alpha)
        if not ((t.l1 >= 2 and t.l2 * s >= 2) or (t.l2 >= 2 and t.l1 * s >= 2)):
            continue
        n = int(rng.integers(4, 21))
        m = int(rng.integers(4, 21))
        if n * m > max_vertices:
            continue
        spec = GridSpec(t, n, m)
        if 2.0 * circumradius(spec) < 1.0:
            return spec


class TestCircumradius:
    def test_right_triangle(self):
        spec = GridSpec(FlatTorus(3.0, 4.0, math.pi / 2), 1, 1)
        assert circumradius(spec) == pytest.approx(2.5, abs=1e-12)

    def test_equilateral(self):
        spec = GridSpec(FlatTorus(2.0, 2.0, math.pi / 3), 4, 4)
        assert circumradius(spec) == pytest.approx(0.5 / math.sqrt(3), abs=1e-12)

    def test_fine_equilateral(self):
        spec = GridSpec(FlatTorus(3.331, 3.331, math.pi / 3), 100, 100)
        assert circumradius(spec) == pytest.approx(0.03331 / math.sqrt(3), abs=1e-9)


class TestVertexIndexing:
    def test_bijection(self):
        n, m = 7, 5
        seen = set()
        for i in range(n):
            for j in range(m):
                v = vertex_index(i, j, m)
                assert vertex_ij(v, m) == (i, j)
                seen.add(v)
        assert seen == set(range(n * m))


class TestBuildGraph:
    def test_small_instance_vertex_count(self):
        g = build_graph(GridSpec(FlatTorus(3.331, 3.331, math.pi / 3), 5, 4))
        assert g.num_vertices == 20
        assert g.degree > 0

    def test_rejects_non_periodic(self):
        with pytest.raises(ValueError, match="perfectly periodic"):
            build_graph(GridSpec(FlatTorus(2.0, 2.0, math.pi / 6), 5, 5))

    def test_rejects_large_circumradius(self):
        with pytest.raises(ValueError, match="circumradius"):
            build_graph(GridSpec(FlatTorus(2.1, 2.1, math.pi / 2), 1, 1))

    def test_no_self_loop_offset(self):
        g = build_graph(GridSpec(FlatTorus(3.331, 3.331, math.pi / 3), 8, 8))
        assert (0, 0) not in g.offsets

    def test_offsets_closed_under_negation(self):
        g = build_graph(GridSpec(FlatTorus(3.4, 3.4, math.pi / 3), 12, 12))
        n, m = g.spec.n, g.spec.m
        offs = set(g.offsets)
        assert offs == {((n - s) % n, (m - t) % m) for s, t in offs}

    def test_equals_naive_on_reference_instances(self):
        for t, n, m in [
            (FlatTorus(3.331, 3.331, math.pi / 3), 12, 12),
            (FlatTorus(3.4, 3.4, math.pi / 3), 10, 10),
            (FlatTorus(2.8, 5.2, 5 * math.pi / 36), 8, 14),
        ]:
            spec = GridSpec(t, n, m)
            assert build_graph(spec).offsets == naive_build_graph(spec).offsets

    def test_equals_naive_on_random_specs(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            spec = random_periodic_spec(rng)
            assert build_graph(spec).offsets == naive_build_graph(spec).offsets

    def test_determinism(self):
        spec = GridSpec(FlatTorus(3.331, 3.331, math.pi / 3), 9, 11)
        assert build_graph(spec).offsets == build_graph(spec).offsets

    def test_naive_size_guard(self):
        spec = GridSpec(FlatTorus(3.331, 3.331, math.pi / 3), 101, 101)
        with pytest.raises(ValueError, match="capped"):
            naive_build_graph(spec)


class TestNeighbors:
    def test_origin_neighbors_are_offsets(self):
        g = build_graph(GridSpec(FlatTorus(3.331, 3.331, math.pi / 3), 8, 9))
        m = g.spec.m
        assert [vertex_ij(v, m) for v in neighbors(g, 0)] == list(g.offsets)

    def test_degree_regular_by_enumeration(self):
        g = build_graph(GridSpec(FlatTorus(3.35, 3.35, math.pi / 3), 11, 13))
        for v in range(g.num_vertices):
            nbrs = neighbors(g, v)
            assert len(nbrs) == g.degree
            assert len(set(nbrs)) == g.degree

    def test_symmetry(self):
        g = build_graph(GridSpec(FlatTorus(3.331, 3.331, math.pi / 3), 10, 10))
        rng = np.random.default_rng(22)
        for v in rng.integers(0, g.num_vertices, 30):
            for u in neighbors(g, int(v)):
                assert int(v) in neighbors(g, u)

    def test_translation_property(self):
        g = build_graph(GridSpec(FlatTorus(3.34, 3.34, math.pi / 3), 9, 7))
        n, m = g.spec.n, g.spec.m
        base = sorted(vertex_ij(u, m) for u in neighbors(g, 0))
        for v in (5, 17, 44):
            i, j = vertex_ij(v, m)
            shifted = sorted(
                (((a - i) % n), ((b - j) % m))
                for a, b in (vertex_ij(u, m) for u in neighbors(g, v))
            )
            assert shifted == base

    def test_out_of_range(self):
        g = build_graph(GridSpec(FlatTorus(3.331, 3.331, math.pi / 3), 5, 4))
        with pytest.raises(ValueError):
            neighbors(g, 20)


def parse_dimacs(data: bytes):
    adj = None
    nm = edges = 0
    for line in data.decode("ascii").splitlines():
        parts = line.split()
        if parts[0] == "p":
            nm, edges = int(parts[2]), int(parts[3])
            adj = {v: set() for v in range(nm)}
        elif parts[0] == "e":
            u, v = int(parts[1]) - 1, int(parts[2]) - 1
            adj[u].add(v)
            adj[v].add(u)
    return nm, edges, adj


class TestExport:
    def test_dimacs_header_and_count(self):
        g = build_graph(GridSpec(FlatTorus(3.331, 3.331, math.pi / 3), 5, 4))
        buf = io.BytesIO()
        export_dimacs(g, buf)
        nm, edges, adj = parse_dimacs(buf.getvalue())
        assert nm == 20
        assert edges == 20 * g.degree // 2
        assert sum(len(s) for s in adj.values()) == 2 * edges

    def test_dimacs_round_trip(self):
        g = build_graph(GridSpec(FlatTorus(3.4, 3.4, math.pi / 3), 7, 8))
        buf = io.BytesIO()
        export_dimacs(g, buf)
        _, _, adj = parse_dimacs(buf.getvalue())
        for v in range(g.num_vertices):
            assert adj[v] == set(neighbors(g, v))

    def test_edgeless_header_only(self):
        # a synthetic graph with no offsets exports just the header
        g = build_graph(GridSpec(FlatTorus(3.331, 3.331, math.pi / 3), 5, 4))
        empty = type(g)(spec=g.spec, r=g.r, offsets=())
        buf = io.BytesIO()
        export_dimacs(empty, buf)
        assert buf.getvalue() == b"p edge 20 0\n"

    def test_deterministic_bytes(self):
        spec = GridSpec(FlatTorus(3.331, 3.331, math.pi / 3), 6, 7)
        b1, b2 = io.BytesIO(), io.BytesIO()
        export_dimacs(build_graph(spec), b1)
        export_dimacs(build_graph(spec), b2)
        assert b1.getvalue() == b2.getvalue()

    def test_edge_list(self):
        g = build_graph(GridSpec(FlatTorus(3.331, 3.331, math.pi / 3), 5, 4))
        buf = io.BytesIO()
        export_edge_list(g, buf)
        lines = buf.getvalue().decode("ascii").splitlines()
        assert len(lines) == g.num_vertices * g.degree // 2
        u, v = map(int, lines[0].split())
        assert v in neighbors(g, u)


class TestEdgeRuleSoundness:
    def test_unit_distance_requires_adjacency(self):
        # non-adjacent vertices: no points of their circumdisks are at distance 1
        spec = GridSpec(FlatTorus(3.331, 3.331, math.pi / 3), 10, 10)
        g = build_graph(spec)
        t = spec.torus
        # euclidean offset -> affine coefficients
        inv = np.linalg.inv(
            np.array(
                [
                    [t.l1, t.l2 * math.cos(t.alpha)],
                    [0.0, t.l2 * math.sin(t.alpha)],
                ]
            )
        )
        rng = np.random.default_rng(23)
        adj = set(neighbors(g, 0))
        non_adj = [v for v in range(1, g.num_vertices) if v not in adj]
        for v in rng.choice(non_adj, size=8, replace=False):
            i, j = vertex_ij(int(v), spec.m)
            for _ in range(100):
                pts = []
                for ci, cj in ((0, 0), (i, j)):
                    ang = rng.uniform(0, 2 * math.pi)
                    rad = g.r * math.sqrt(rng.uniform(0, 1))
                    off = inv @ np.array([rad * math.cos(ang), rad * math.sin(ang)])
                    pts.append(
                        TorusPoint(ci / spec.n + off[0], cj / spec.m + off[1])
                    )
                assert abs(metric(t, pts[0], pts[1]) - 1.0) >= 1e-6
