import torch as T
from unittest import TestCase

from sparse_fading.errors import EnumerationBudgetError, InfeasibleError
from sparse_fading.model.signal import SparseSignal, generate_signal
from sparse_fading.solver.certificate import recovery_certificate
from sparse_fading.solver.interior_point import basis_pursuit
from sparse_fading.solver.oracle import (brute_force_oracle,
                                         consistent_supports,
                                         oracle_is_unique)
from sparse_fading.utils.seeding import make_generator
from sparse_fading.utils.tensor_utils import relative_error


def gaussian(m, n, seed):
    return T.randn(m, n, generator=make_generator(seed), dtype=T.float64)


class TestOracle(TestCase):
    def test_zero_observation(self):
        result = brute_force_oracle(gaussian(4, 6, 0),
                                    T.zeros(4, dtype=T.float64), 2)

        assert (result.x_hat == 0).all()
        assert result.iterations == 1

    def test_finds_generating_support(self):
        B = gaussian(6, 10, 1)
        x = SparseSignal.from_values([0.0] * 3 + [7.0] + [0.0] * 4 + [-3.0, 0.0])
        solutions = consistent_supports(B, B @ x.values, 3)

        assert oracle_is_unique(solutions)
        assert solutions[0].support == (3, 8)
        assert relative_error(x.values, solutions[0].x_hat) < 1e-10

    def test_iterations_count_enumerated_supports(self):
        B = gaussian(5, 8, 2)
        x = SparseSignal.from_values([0.0, 4.0] + [0.0] * 6)
        result = brute_force_oracle(B, B @ x.values, 3)

        # the empty support plus the eight singletons
        assert result.iterations == 9

    def test_nothing_fits(self):
        B = gaussian(6, 8, 3)
        y = T.randn(6, generator=make_generator(4), dtype=T.float64)

        assert consistent_supports(B, y, 2) == []
        with self.assertRaises(InfeasibleError):
            brute_force_oracle(B, y, 2)

    def test_residual_tolerance_is_absolute(self):
        # the best singleton leaves 1e-6, above 1e-8 however large y is
        B = T.eye(2, dtype=T.float64)
        y = T.tensor([1e6, 1e-6], dtype=T.float64)

        assert consistent_supports(B, y, 1) == []
        loose = consistent_supports(B, y, 1, tolerance=1e-5)
        assert [s.support for s in loose] == [(0,)]

    def test_budget(self):
        with self.assertRaises(EnumerationBudgetError):
            consistent_supports(gaussian(5, 25, 0),
                                T.zeros(5, dtype=T.float64), 2)
        with self.assertRaises(EnumerationBudgetError):
            consistent_supports(gaussian(5, 10, 0),
                                T.zeros(5, dtype=T.float64), 4)

    def test_agrees_with_basis_pursuit(self):
        compared = 0
        for trial in range(200):
            B = gaussian(8, 12, 100 + trial)
            x = generate_signal(12, 2, 10.0, 20.0, make_generator(trial))
            y = B @ x.values
            solutions = consistent_supports(B, y, 2)
            if not oracle_is_unique(solutions) or \
                    not recovery_certificate(B, x).holds:
                continue
            compared += 1
            bp = basis_pursuit(B, y)
            assert relative_error(solutions[0].x_hat, bp.x_hat) < 1e-5

        assert compared > 100
