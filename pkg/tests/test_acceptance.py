"""Acceptance gate: the nine end-to-end checks this package must satisfy.

One test per criterion, at the stated tolerances and runtime caps; run with
-v to get one pass/fail line each.  The solver criteria share one set of
default-config solves through a module fixture so the suite stays at desk
scale.
"""

import io
import math
import time

import numpy as np
import pytest

from torusmis.croft import croft_density, croft_density_mc, croft_optimum
from torusmis.grid_graph import GridSpec, build_graph, naive_build_graph, neighbors
from torusmis.mis import (
    SolverConfig,
    density_bound,
    exact_mis,
    greedy,
    local_search,
    solve_instance,
    validate,
)
from torusmis.render import RenderStyle, render_solution
from torusmis.sweep import DATASET_1, DATASET_2, DATASET_3, DATASET_4, generate_dataset
from torusmis.torus import FlatTorus, TorusPoint, metric, metric_oracle

from helpers import enumerate_mis
from test_grid_graph import random_periodic_spec
from test_render import parse_svg_paths, polygon_area, subpath_points

HEADLINE_TORUS = FlatTorus(3.331, 3.331, math.pi / 3)


@pytest.fixture(scope="module")
def headline_solves():
    """Default-config solves on the headline torus at n = 50, 100, 150."""
    out = {}
    cfg = SolverConfig()
    for n in (50, 100, 150):
        g = build_graph(GridSpec(HEADLINE_TORUS, n, n))
        out[n] = (g, solve_instance(g, cfg))
    return out


def test_criterion_1_metric_oracle_equivalence():
    start = time.monotonic()
    rng = np.random.default_rng(101)
    cases = 100_000
    ls = rng.uniform(2.0, 6.0, size=(cases, 2))
    alphas = rng.uniform(math.pi / 9, math.pi / 2, size=cases)
    pts = rng.random(size=(cases, 4))
    worst = 0.0
    for k in range(cases):
        t = FlatTorus(ls[k, 0], ls[k, 1], alphas[k])
        p1 = TorusPoint(pts[k, 0], pts[k, 1])
        p2 = TorusPoint(pts[k, 2], pts[k, 3])
        worst = max(worst, abs(metric(t, p1, p2) - metric_oracle(t, p1, p2, 20)))
    elapsed = time.monotonic() - start
    assert worst <= 1e-9
    assert elapsed < 30.0


def test_criterion_2_table_cardinalities():
    for ds, expected in (
        (DATASET_1, 2986),
        (DATASET_2, 1155),
        (DATASET_3, 726),
        (DATASET_4, 455),
    ):
        start = time.monotonic()
        assert len(generate_dataset(ds)) == expected
        assert time.monotonic() - start < 1.0


def test_criterion_3_croft_optimum():
    start = time.monotonic()
    rng = np.random.default_rng(103)
    lo, hi = math.sqrt(3) / 2 + 1e-6, 1.0 - 1e-9
    for x in rng.uniform(lo, hi, size=20):
        estimate, se = croft_density_mc(float(x), samples=10_000_000, seed=7)
        assert abs(croft_density(float(x)) - estimate) <= 3.0 * se
    x_star, density_star = croft_optimum()
    elapsed = time.monotonic() - start
    assert x_star == pytest.approx(0.96533, abs=5e-4)
    assert density_star == pytest.approx(0.22936, abs=5e-5)
    assert elapsed < 60.0


def test_criterion_4_graph_construction_equivalence():
    start = time.monotonic()
    rng = np.random.default_rng(104)
    for _ in range(50):
        spec = random_periodic_spec(rng)
        g = build_graph(spec)
        assert g == naive_build_graph(spec)
        offs = set(g.offsets)
        assert all(((-s) % spec.n, (-t) % spec.m) in offs for s, t in offs)
        assert all(len(neighbors(g, v)) == g.degree for v in range(0, g.num_vertices, 7))
    assert time.monotonic() - start < 60.0


def test_criterion_5_theorem_arithmetic():
    assert density_bound(4, 5, 4) == 0.2
    assert density_bound(2193, 100, 100) == 0.2193


def test_criterion_6_solver_quality_floor(headline_solves):
    g, s = headline_solves[100]
    assert validate(g, s)
    bound = density_bound(s.size, 100, 100)
    assert bound >= 0.215
    assert bound <= 0.2470


def test_criterion_7_exact_oracle_agreement():
    start = time.monotonic()
    rng = np.random.default_rng(107)
    cfg = SolverConfig(seed=2, time_limit=0.005, restarts=1, plateau_moves=200)
    for _ in range(100):
        g = build_graph(random_periodic_spec(rng, max_vertices=64))
        masks = [sum(1 << w for w in neighbors(g, v)) for v in range(g.num_vertices)]
        optimum = exact_mis(g)
        assert optimum.size == enumerate_mis(masks)
        assert optimum.size >= local_search(g, greedy(g, seed=2), cfg).size
    assert time.monotonic() - start < 120.0


def test_criterion_8_larger_n_trend(headline_solves):
    bounds = {}
    for n, (g, s) in headline_solves.items():
        assert validate(g, s)
        bounds[n] = density_bound(s.size, n, n)
    assert bounds[100] >= bounds[50] - 0.002
    assert bounds[150] >= bounds[100] - 0.002


def test_criterion_9_rendering():
    spec = GridSpec(FlatTorus(2.5, 2.2, math.radians(75)), 5, 4)
    s = exact_mis(build_graph(spec))
    style = RenderStyle()
    sink = io.BytesIO()
    render_solution(spec, s, style, sink)
    paths = parse_svg_paths(sink.getvalue())
    assert len(paths) == 20
    assert sum(1 for _, fill in paths if fill == style.cell_fill_in_set) == s.size
    t = spec.torus
    px = style.canvas_width / (t.l1 + t.l2 * math.cos(t.alpha))
    total = sum(
        abs(polygon_area(poly)) for d, _ in paths for poly in subpath_points(d)
    ) / (px * px)
    target = t.l1 * t.l2 * math.sin(t.alpha)
    assert abs(total - target) / target < 1e-4
