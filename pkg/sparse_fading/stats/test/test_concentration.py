import itertools
import math

import torch as T
from unittest import TestCase

from sparse_fading.errors import (DegenerateError, DivergenceError,
                                  DomainError, InputError)
from sparse_fading.stats.concentration import (bernstein_bound,
                                               mgf_bound, mgf_envelope,
                                               mgf_exact, mgf_quadrature,
                                               subexp_norm_estimate,
                                               weighted_sum_tails)
from sparse_fading.stats.laws import EnsembleExtremes, MixtureLaw
from sparse_fading.stats.sampling import sample_mixture
from sparse_fading.utils.seeding import make_generator


class TestMgf(TestCase):
    def test_at_zero(self):
        law = MixtureLaw(0.3, 2.0)

        assert mgf_exact(0.0, law) == 1.0
        assert mgf_bound(0.0, EnsembleExtremes.from_laws([law])) == 1.0

    def test_substitution(self):
        assert math.isclose(mgf_exact(0.5, MixtureLaw(1.0, 1.0)), 4.0 / 3.0)

    def test_divergence(self):
        with self.assertRaises(DivergenceError):
            mgf_exact(1.0, MixtureLaw(0.5, 1.0))
        with self.assertRaises(DivergenceError):
            mgf_exact(-0.6, MixtureLaw(0.5, 2.0))

    def test_quadrature_grid(self):
        gammas = (0.05, 0.3, 0.6, 1.0, 0.9)
        sigma_bars = (0.5, 1.0, 2.0, 4.0, 10.0)
        fractions = (-0.5, -0.2, 0.1, 0.35, 0.5)
        points = list(itertools.product(gammas, sigma_bars, fractions))[:50]

        assert len(points) == 50
        for gamma, sigma_bar, fraction in points:
            law = MixtureLaw(gamma, sigma_bar)
            t = fraction / sigma_bar
            exact = mgf_exact(t, law)

            assert abs(mgf_quadrature(t, law) - exact) <= 1e-6 * exact

    def test_bound_domain(self):
        extremes = EnsembleExtremes.iid(1.0, 2.0)

        with self.assertRaises(DomainError):
            mgf_bound(0.51, extremes)

    def test_bound_undercuts_law_attaining_eta_max(self):
        # the bound drops the 1 / (1 - sigma_bar^2 t^2) factor, so the law
        # with the largest eta exceeds it at every t != 0
        for gamma, t in ((1.0, 0.5), (0.1, 0.3)):
            law = MixtureLaw(gamma, 1.0)
            extremes = EnsembleExtremes.from_laws([law])

            assert mgf_exact(t, law) > mgf_bound(t, extremes)

    def test_bound_holds_for_laws_below_eta_max(self):
        laws = [MixtureLaw(1.0, 2.0), MixtureLaw(0.5, 1.0),
                MixtureLaw(0.2, 1.5), MixtureLaw(0.6, 0.5)]
        extremes = EnsembleExtremes.from_laws(laws)
        dominated = [law for law in laws
                     if law.eta <= 0.75 * extremes.eta_max]

        assert len(dominated) == 3
        for law in dominated:
            for fraction in T.linspace(-0.5, 0.5, 21).tolist():
                t = fraction / extremes.eta_tilde_max
                assert mgf_exact(t, law) <= mgf_bound(t, extremes)

    def test_envelope_holds_for_every_law(self):
        laws = [MixtureLaw(1.0, 1.0), MixtureLaw(0.1, 3.0),
                MixtureLaw(0.5, 2.0)]
        extremes = EnsembleExtremes.from_laws(laws)

        for law in laws:
            for fraction in T.linspace(-0.95, 0.95, 39).tolist():
                t = fraction / extremes.eta_tilde_max
                assert mgf_exact(t, law) <= mgf_envelope(t, extremes)


class TestBernstein(TestCase):
    def test_vacuous_near_zero(self):
        bound = bernstein_bound(1e-12, [1.0], EnsembleExtremes.iid(1.0, 1.0))

        assert math.isclose(bound.raw, 2.0, rel_tol=1e-9)
        assert bound.value == 1.0

    def test_single_variable(self):
        bound = bernstein_bound(1.0, [1.0, 0.0],
                                EnsembleExtremes.iid(1.0, 1.0))

        assert math.isclose(bound.raw, 2 * math.exp(-0.25))
        assert math.exp(-1.0) <= bound.raw

    def test_monotone_and_sign_invariant(self):
        extremes = EnsembleExtremes.from_vectors([0.2, 1.0, 0.5],
                                                 [1.0, 2.0, 3.0])
        alpha = T.tensor([0.3, -1.2, 0.7], dtype=T.float64)
        previous = math.inf

        for t in T.linspace(0.1, 30.0, 60).tolist():
            raw = bernstein_bound(t, alpha, extremes).raw
            assert raw <= previous
            assert raw == bernstein_bound(t, -alpha, extremes).raw
            previous = raw

    def test_errors(self):
        extremes = EnsembleExtremes.iid(1.0, 1.0)

        with self.assertRaises(DegenerateError):
            bernstein_bound(1.0, [0.0, 0.0], extremes)
        with self.assertRaises(DomainError):
            bernstein_bound(0.0, [1.0], extremes)

    def test_empirical_tail_below_bound(self):
        n = 50
        rng = make_generator(31)
        gamma = 0.1 + 0.9 * T.rand(n, generator=rng, dtype=T.float64)
        sigma_bar = 0.5 + 2.0 * T.rand(n, generator=rng, dtype=T.float64)
        extremes = EnsembleExtremes.from_vectors(gamma, sigma_bar)

        for _ in range(3):
            alpha = T.randn(n, generator=rng, dtype=T.float64)
            scale = math.sqrt(2 * extremes.eta_max) * T.linalg.vector_norm(
                alpha).item()
            thresholds = T.tensor([0.5, 1.0, 2.0, 3.0, 4.0],
                                  dtype=T.float64) * scale
            tails = weighted_sum_tails(alpha, gamma, sigma_bar, thresholds,
                                       200_000, rng, batch=50_000)

            for t, tail in zip(thresholds.tolist(), tails.tolist()):
                assert tail <= bernstein_bound(t, alpha, extremes).value


class TestSubexpNorm(TestCase):
    def test_constant(self):
        assert math.isclose(subexp_norm_estimate(T.full((10,), -3.0)), 3.0)

    def test_laplace(self):
        samples = sample_mixture(T.tensor([1.0], dtype=T.float64),
                                 T.tensor([1.0], dtype=T.float64),
                                 (1_000_000,), make_generator(12))

        assert abs(subexp_norm_estimate(samples, p_max=10) - 1.0) < 0.05

    def test_homogeneity(self):
        samples = T.randn(1000, generator=make_generator(3),
                          dtype=T.float64)

        assert math.isclose(subexp_norm_estimate(2 * samples),
                            2 * subexp_norm_estimate(samples),
                            rel_tol=1e-9)

    def test_empty(self):
        with self.assertRaises(InputError):
            subexp_norm_estimate([])
