import math
from unittest import TestCase

from sparse_fading.bounds.measurement import corollary_iid_bound
from sparse_fading.design.energy import (energy_report,
                                         max_gamma_under_budget,
                                         required_energy)
from sparse_fading.errors import InfeasibleError


class TestRequiredEnergy(TestCase):
    def test_product(self):
        assert math.isclose(required_energy(100, 0.2, 100, 1.0), 2000.0)
        assert required_energy(100, 0.0, 100, 1.0) == 0.0
        assert required_energy(200, 0.2, 100, 1.0) == \
            2 * required_energy(100, 0.2, 100, 1.0)


class TestBudget(TestCase):
    def test_huge_budget(self):
        assert max_gamma_under_budget(1e12, 1.0, 1.0, 10, 100, 0.01) == 1.0

    def test_half_budget(self):
        full = 1.0 * 1.0 * 10 * 100 * math.log(20000)

        assert math.isclose(max_gamma_under_budget(full / 2, 1.0, 1.0, 10,
                                                   100, 0.01), 0.25)

    def test_closed_loop_feasible(self):
        full = 10 * 100 * math.log(20000)
        for fraction in (0.01, 0.1, 0.5, 0.9, 1.0, 3.0):
            for C0 in (0.5, 1.0, 2.0):
                report = energy_report(fraction * full * C0, 1.0, 10, 100,
                                       0.01, C0=C0)
                M = corollary_iid_bound(10, 100, report.gamma_star, 0.01,
                                        C0=C0)

                assert report.M == M
                assert report.feasible

    def test_zero_budget(self):
        with self.assertRaises(InfeasibleError):
            energy_report(0.0, 1.0, 10, 100, 0.01)
