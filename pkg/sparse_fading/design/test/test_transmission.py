import math

import torch as T
from unittest import TestCase

from sparse_fading.design.transmission import (DesignProblem, gamma_bar,
                                               grid_search_gamma,
                                               optimal_gamma, psi,
                                               psi_optimal,
                                               random_search_gamma)
from sparse_fading.errors import (DimensionError, EnumerationBudgetError,
                                  ParameterError)
from sparse_fading.utils.config import DEFAULT_CONFIG
from sparse_fading.utils.seeding import make_generator


class TestPsi(TestCase):
    def test_identical_channels(self):
        assert math.isclose(psi([0.25] * 4, [2.0] * 4), 2.0)
        assert math.isclose(psi([1.0] * 4, [3.0] * 4), 1.0)

    def test_batch(self):
        values = psi(T.tensor([[1.0, 1.0], [0.5, 0.5]], dtype=T.float64),
                     [1.0, 1.0])

        assert T.allclose(values, T.tensor([1.0, math.sqrt(2.0)],
                                           dtype=T.float64))

    def test_mismatch(self):
        with self.assertRaises(DimensionError):
            psi([1.0, 1.0], [1.0, 2.0, 3.0])
        with self.assertRaises(ParameterError):
            psi([0.0, 1.0], [1.0, 2.0])

    def test_at_least_one(self):
        rng = make_generator(6)
        nu = 0.5 + 5 * T.rand(8, generator=rng, dtype=T.float64)
        _, scores = random_search_gamma(nu, 1000, rng)

        assert (scores >= 1.0).all()


class TestOptimalGamma(TestCase):
    def test_substitution(self):
        problem = DesignProblem.build([1.0, 2.0, 4.0], E_per_node=0.5)

        assert T.allclose(optimal_gamma(problem),
                          T.tensor([0.5, 0.125, 0.03125], dtype=T.float64))

    def test_keeps_node_order(self):
        problem = DesignProblem.build([4.0, 1.0, 2.0], E_per_node=0.5)

        assert T.allclose(optimal_gamma(problem),
                          T.tensor([0.03125, 0.5, 0.125], dtype=T.float64))

    def test_identical_channels(self):
        problem = DesignProblem.build([3.0] * 5, sigma_a2=2.0, E_per_node=1.0)

        assert T.allclose(optimal_gamma(problem),
                          T.full((5,), 0.5, dtype=T.float64))

    def test_equalizes_and_attains_closed_form(self):
        rng = make_generator(8)
        nu = 1 + 9 * T.rand(10, generator=rng, dtype=T.float64)
        problem = DesignProblem.build(nu, E_per_node=0.7)
        gamma = optimal_gamma(problem)
        weighted = gamma * nu ** 2

        assert T.allclose(weighted, weighted.max().expand(10))
        assert (gamma <= 0.7 + 1e-15).all() and (gamma > 0).all()
        assert math.isclose(psi(gamma, nu), psi_optimal(nu, 0.7),
                            rel_tol=1e-12)

    def test_scale_invariant(self):
        nu = T.tensor([1.5, 3.0, 7.0], dtype=T.float64)
        base = optimal_gamma(DesignProblem.build(nu))
        scaled = optimal_gamma(DesignProblem.build(2.5 * nu))

        assert T.allclose(base, scaled)

    def test_beats_random_designs(self):
        rng = make_generator(11)
        for _ in range(20):
            nu = 1 + 9 * T.rand(10, generator=rng, dtype=T.float64)
            best = psi(optimal_gamma(DesignProblem.build(nu)), nu)
            _, scores = random_search_gamma(nu, 1000, rng)

            assert (scores >= best * (1 - 1e-12)).all()

    def test_matches_grid_search(self):
        nu = T.tensor([1.0, 10.0], dtype=T.float64)
        gamma = optimal_gamma(DesignProblem.build(nu))
        grid_gamma, grid_psi = grid_search_gamma(nu, step=0.01)

        assert math.isclose(psi(gamma, nu), 10.0, rel_tol=1e-12)
        assert math.isclose(grid_psi, psi(gamma, nu), rel_tol=1e-9)
        assert T.allclose(grid_gamma, gamma)

    def test_grid_search_three_nodes(self):
        nu = T.tensor([1.0, 2.0, 2.5], dtype=T.float64)
        _, grid_psi = grid_search_gamma(nu, step=0.05)

        assert grid_psi >= psi_optimal(nu, 1.0) * (1 - 1e-12)

    def test_grid_budget(self):
        with self.assertRaises(EnumerationBudgetError):
            grid_search_gamma([1.0] * 4)


class TestGammaBar(TestCase):
    def test_cap(self):
        assert gamma_bar(0.5, 1.0) == 0.5
        assert gamma_bar(3.0, 1.0) == 1.0
        assert gamma_bar([0.2, 0.2], 0.4) == 0.5

    def test_heterogeneous_caps(self):
        with self.assertRaises(ParameterError):
            gamma_bar([0.2, 0.3], 1.0)

    def test_from_config(self):
        config = dict(DEFAULT_CONFIG, nu=2.0, N=4, E_per_node=0.25)
        problem = DesignProblem.from_config(config)

        assert problem.nu.tolist() == [2.0] * 4
        assert problem.gamma_bar == 0.25
