import math
import random

import torch as T
from unittest import TestCase

from sparse_fading.bounds.measurement import (BoundInputs, analytic_R,
                                              certificate_failure_bound,
                                              corollary_iid_bound,
                                              dominant_scalings,
                                              estimate_R, fading_penalty,
                                              gamma_dominance_threshold,
                                              m1_dominates,
                                              psi_from_extremes,
                                              theorem1_bounds, theorem1_m1,
                                              theorem1_m2)
from sparse_fading.errors import DegenerateError, DomainError, ParameterError
from sparse_fading.model.ensemble import generate_ensemble
from sparse_fading.model.network import NetworkConfig
from sparse_fading.model.signal import generate_signal
from sparse_fading.stats.laws import EnsembleExtremes
from sparse_fading.utils.seeding import make_generator

IID_M1 = 20 * (math.sqrt(math.log(20000)) + math.sqrt(math.log(1000) / 2)) ** 2


def iid_inputs(gamma=1.0, sigma_bar=1.0, R=None, k=10, N=100):
    return BoundInputs(k=k, N=N,
                       extremes=EnsembleExtremes.iid(gamma, sigma_bar),
                       epsilon=0.01, epsilon_prime=0.01, c_prime=1.0, R=R)


class TestMeasurementBounds(TestCase):
    def test_iid_m1(self):
        report = theorem1_bounds(iid_inputs())

        assert math.isclose(report.M1, IID_M1, rel_tol=1e-9)
        assert abs(report.M1 - 501) < 1
        assert report.M_required == max(report.M1, report.M2)

    def test_two_pass_R(self):
        inputs = iid_inputs()
        report = theorem1_bounds(inputs)
        first = theorem1_m2(inputs, 1.0)
        R = analytic_R(10, max(IID_M1, first))

        assert math.isclose(report.R, R, rel_tol=1e-12)
        assert math.isclose(report.M2, theorem1_m2(inputs, R), rel_tol=1e-12)
        assert report.M2 < report.M1 and report.dominant
        assert theorem1_bounds(inputs, passes=1).M2 == first

    def test_fixed_R(self):
        report = theorem1_bounds(iid_inputs(R=0.5))
        expected = 20 * (0.5 * math.log(20000) + math.sqrt(
            math.log(1000) / 2)) ** 2

        assert report.R == 0.5
        assert math.isclose(report.M2, expected, rel_tol=1e-9)

    def test_equal_eta_reduces_ratio(self):
        # at eta_max = eta_min = 1, M2 >= M1 iff R sqrt(ln(2N/eps)) >= 1
        log_term = math.log(20000)
        for R in (0.5 / math.sqrt(log_term), 2 / math.sqrt(log_term)):
            report = theorem1_bounds(iid_inputs(R=R))
            assert (report.M2 >= report.M1) == (R * math.sqrt(log_term) >= 1)

    def test_nonidentical_grows_with_spread(self):
        previous = 0.0
        for nu_max in (1.0, 2.0, 5.0, 10.0):
            inputs = BoundInputs(
                k=10, N=100,
                extremes=EnsembleExtremes.from_vectors([1.0, 1.0],
                                                       [1.0, nu_max]))
            m1 = theorem1_m1(inputs)
            assert m1 > previous
            previous = m1

        assert inputs.extremes.ratio == 100.0
        assert math.isclose(previous, 2000 * (
            10 * math.sqrt(math.log(20000)) +
            math.sqrt(math.log(1000) / 2)) ** 2, rel_tol=1e-9)

    def test_monotone_in_k_and_n(self):
        rng = random.Random(7)
        for _ in range(1000):
            gamma = [rng.uniform(0.05, 1.0) for _ in range(3)]
            sigma_bar = [rng.uniform(0.2, 5.0) for _ in range(3)]
            extremes = EnsembleExtremes.from_vectors(gamma, sigma_bar)
            k, N = rng.randint(1, 50), rng.randint(60, 5000)
            R = rng.uniform(0.01, 1.0)
            base = BoundInputs(k=k, N=N, extremes=extremes, R=R)
            more_k = BoundInputs(k=k + 1, N=N, extremes=extremes, R=R)
            more_n = BoundInputs(k=k, N=2 * N, extremes=extremes, R=R)

            for bigger in (more_k, more_n):
                assert theorem1_m1(bigger) > theorem1_m1(base)
                assert theorem1_m2(bigger, R) > theorem1_m2(base, R)

    def test_degenerate_k(self):
        with self.assertRaises(DegenerateError):
            iid_inputs(k=0)
        with self.assertRaises(ParameterError):
            iid_inputs(R=0.0)


class TestDominance(TestCase):
    def test_m1_dominates_dense(self):
        assert m1_dominates(EnsembleExtremes.iid(1.0, 1.0))
        assert not m1_dominates(EnsembleExtremes.iid(0.25, 1.0))

    def test_dominant_scalings_iid(self):
        log_term = math.log(20000)
        m1, m2 = dominant_scalings(EnsembleExtremes.iid(0.25, 3.0), 10, 100,
                                   0.01)

        assert math.isclose(m1, 10 * log_term)
        assert math.isclose(m2, 10 * log_term / math.sqrt(0.25))

    def test_gamma_threshold(self):
        R = 0.1
        gamma_0 = gamma_dominance_threshold(R, 100, 0.01)

        assert math.isclose(gamma_0, R ** 2 * math.log(20000), rel_tol=1e-6)
        below = theorem1_bounds(iid_inputs(gamma=gamma_0 / 2, R=R))
        above = theorem1_bounds(iid_inputs(gamma=min(2 * gamma_0, 1.0), R=R))
        assert below.M2 > below.M1
        assert above.M2 < above.M1

    def test_gamma_threshold_saturates(self):
        assert gamma_dominance_threshold(1.0, 100, 0.01) == 1.0


class TestFadingPenalty(TestCase):
    def test_two_nodes(self):
        penalty = fading_penalty([1.0, 10.0])

        assert penalty.C1 == 100.0 and penalty.C2 == 10000.0
        assert math.isclose(penalty.designed_scaling(1.0, 10, 100, 0.01),
                            10 * 10 * math.log(20000))
        assert math.isclose(penalty.dense_scaling(10, 100, 0.01),
                            10000 * 10 * math.log(20000))

    def test_ordering_on_random_channels(self):
        rng = make_generator(5)
        for _ in range(1000):
            nu = 0.1 + 10 * T.rand(6, generator=rng, dtype=T.float64)
            penalty = fading_penalty(nu)
            assert penalty.C2 >= penalty.C1 >= 1.0

        identical = fading_penalty([3.0, 3.0, 3.0])
        assert identical.C1 == identical.C2 == 1.0

    def test_report_carries_penalty(self):
        extremes = EnsembleExtremes.from_vectors([1.0, 0.01], [1.0, 10.0])
        report = theorem1_bounds(BoundInputs(k=10, N=100, extremes=extremes))

        assert math.isclose(report.C1, 100.0)
        assert math.isclose(report.C2, report.C1 ** 2)
        assert math.isclose(report.psi, 10.0)
        assert math.isclose(psi_from_extremes(extremes), 10.0)


class TestIidBound(TestCase):
    def test_value(self):
        bound = corollary_iid_bound(10, 100, 1.0, 0.01)

        assert math.isclose(bound, 10 * math.log(20000), rel_tol=1e-12)
        assert abs(bound - 99.0) < 0.1

    def test_sparsity_ratio(self):
        assert math.isclose(corollary_iid_bound(10, 100, 0.25, 0.01) /
                            corollary_iid_bound(10, 100, 1.0, 0.01), 2.0)

    def test_domain(self):
        with self.assertRaises(DomainError):
            corollary_iid_bound(10, 100, 0.0, 0.01)


class TestEstimateR(TestCase):
    def test_analytic(self):
        assert math.isclose(estimate_R(k=1, M=50), math.sqrt(1 / 100))
        assert estimate_R(k=5, M=10) == 0.5
        assert estimate_R(k=10, M=2) == 1.0

    def test_single_column_is_peaky(self):
        B = T.zeros(4, 3, dtype=T.float64)
        B[0, 0] = 2.0

        assert estimate_R(B=B, support=[0], signs=[1.0]) == 1.0

    def test_empirical_mean_near_analytic(self):
        cfg = NetworkConfig.build(N=100, M=80, gamma=1.0, nu=1.0)
        values = []
        for seed in range(100):
            x = generate_signal(100, 10, 10.0, 20.0, make_generator(seed))
            ens = generate_ensemble(x, cfg, make_generator(1000 + seed))
            values.append(estimate_R(B=ens.B, support=x.support,
                                     signs=x.signs))

        mean = sum(values) / len(values)
        analytic = analytic_R(10, 80)
        assert analytic / 2 <= mean <= 2 * analytic

    def test_missing_arguments(self):
        with self.assertRaises(ParameterError):
            estimate_R(k=3)


class TestCertificateFailure(TestCase):
    def test_union_bound(self):
        b_S = T.zeros(5, dtype=T.float64)
        b_S[0] = 0.1
        bound = certificate_failure_bound(b_S, EnsembleExtremes.iid(1.0, 1.0),
                                          N=10)

        assert math.isclose(bound.raw, 20 * math.exp(-5.0), rel_tol=1e-12)
