"""Closed-form packing density against the Monte-Carlo oracle."""

import math

import numpy as np
import pytest

from torusmis.croft import (
    X_DOMAIN,
    croft_area,
    croft_density,
    croft_density_mc,
    croft_optimum,
    disc_packing_density,
)


class TestDomain:
    def test_rejects_low_x(self):
        with pytest.raises(ValueError):
            croft_density(math.sqrt(3) / 2)

    def test_rejects_high_x(self):
        with pytest.raises(ValueError):
            croft_density(1.0)

    def test_accepts_interior(self):
        assert 0.0 < croft_density(0.95) < 1.0


class TestClosedForm:
    def test_near_one_approaches_disc_limit(self):
        # as x -> 1 the hexagon stops clipping and the density tends to pi/(8 sqrt 3)
        assert croft_density(1 - 1e-9) == pytest.approx(
            disc_packing_density(), abs=1e-6
        )

    def test_reference_height(self):
        assert croft_density(0.96533) == pytest.approx(0.22936, abs=5e-5)

    def test_area_monotone_in_x(self):
        xs = np.linspace(X_DOMAIN[0] + 1e-3, X_DOMAIN[1] - 1e-3, 50)
        areas = [croft_area(x) for x in xs]
        assert all(a2 > a1 for a1, a2 in zip(areas, areas[1:]))

    def test_matches_monte_carlo(self):
        rng = np.random.default_rng(31)
        for x in rng.uniform(X_DOMAIN[0] + 1e-3, X_DOMAIN[1] - 1e-3, 5):
            est, se = croft_density_mc(float(x), samples=1_000_000, seed=17)
            assert abs(croft_density(float(x)) - est) <= 3 * se


class TestOptimum:
    def test_location_and_value(self):
        x_star, density = croft_optimum()
        assert x_star == pytest.approx(0.96533, abs=5e-4)
        assert density == pytest.approx(0.22936, abs=5e-5)

    def test_beats_disc_packing(self):
        _, density = croft_optimum()
        assert density > disc_packing_density()

    def test_is_maximal_over_random_heights(self):
        _, density = croft_optimum()
        rng = np.random.default_rng(32)
        xs = rng.uniform(X_DOMAIN[0] + 1e-6, X_DOMAIN[1] - 1e-9, 1000)
        assert density >= max(croft_density(float(x)) for x in xs)

    def test_bracket_stability(self):
        # the golden-section result is insensitive to small bracket perturbations
        x_star, _ = croft_optimum()
        d = croft_density
        for eps in (1e-5, 3e-5):
            x = x_star + eps
            assert d(x) <= d(x_star) + 1e-12
            x = x_star - eps
            assert d(x) <= d(x_star) + 1e-12
