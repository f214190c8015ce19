import math
from dataclasses import asdict, dataclass
from typing import List

import pandas as pd
import torch as T

from sparse_fading.stats.concentration import (bernstein_bound, ks_statistic,
                                               isotropy_deviation,
                                               mgf_exact, mgf_quadrature,
                                               weighted_sum_tails)
from sparse_fading.stats.laws import (EnsembleExtremes, MixtureLaw,
                                      laplace_product_cdf)
from sparse_fading.stats.sampling import (sample_laplace_product,
                                          sample_mixture)
from sparse_fading.utils.seeding import derive_seed, make_generator
from sparse_fading.utils.tensor_utils import DTYPE, to_numpy

CHECK_GROUPS = ('pdf', 'bernstein')
MGF_TOLERANCE = 1e-6
MEAN_ABS_TOLERANCE = 0.005
VARIANCE_TOLERANCE = 0.02
BERNSTEIN_MULTIPLES = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0)


@dataclass(frozen=True)
class ValidationCheck:
    group: str
    check: str
    statistic: float
    threshold: float
    passed: bool


def laplace_checks(samples: int, ks_threshold: float,
                   rng: T.Generator) -> List[ValidationCheck]:
    """h a with unit scales against the Laplace(1) law"""
    w = sample_laplace_product(1.0, 1.0, samples, rng)
    ks = ks_statistic(w, lambda v: laplace_product_cdf(v, 1.0, 1.0))
    mean_abs = w.abs().mean().item()
    variance = w.var().item()

    return [ValidationCheck('pdf', 'laplace_ks', ks, ks_threshold,
                            ks < ks_threshold),
            ValidationCheck('pdf', 'laplace_mean_abs', mean_abs,
                            MEAN_ABS_TOLERANCE,
                            abs(mean_abs - 1.0) <= MEAN_ABS_TOLERANCE),
            ValidationCheck('pdf', 'laplace_variance', variance,
                            VARIANCE_TOLERANCE,
                            abs(variance - 2.0) <= VARIANCE_TOLERANCE)]


def mgf_check(rng: T.Generator, points=50) -> ValidationCheck:
    """Largest relative gap between closed form and quadrature mgf"""
    worst = 0.0
    for _ in range(points):
        gamma, sigma_bar, fraction = T.rand(3, generator=rng,
                                            dtype=DTYPE).tolist()
        law = MixtureLaw(gamma=0.05 + 0.95 * gamma,
                         sigma_bar=0.2 + 4.8 * sigma_bar)
        t = (fraction - 0.5) / law.sigma_bar
        exact = mgf_exact(t, law)
        worst = max(worst, abs(mgf_quadrature(t, law) - exact) / exact)

    return ValidationCheck('pdf', 'mgf_quadrature', worst, MGF_TOLERANCE,
                           worst <= MGF_TOLERANCE)


def isotropy_check(gamma: float, sigma_bar: float, rows: int, dim: int,
                   threshold: float, rng: T.Generator) -> ValidationCheck:
    draws = sample_mixture(T.full((dim,), gamma, dtype=DTYPE),
                           T.full((dim,), sigma_bar, dtype=DTYPE),
                           (rows, dim), rng)
    deviation = isotropy_deviation(draws, math.sqrt(2 * gamma *
                                                    sigma_bar ** 2))
    return ValidationCheck('pdf', 'isotropy_deviation', deviation, threshold,
                           deviation <= threshold)


def bernstein_checks(n: int, alphas: int, trials: int, batch: int,
                     rng: T.Generator) -> List[ValidationCheck]:
    """
    Empirical tails of weighted sums of non identical mixture entries
    against the Bernstein bound
    Args:
        n: number of summed variables
        alphas: random weight vectors drawn
        trials: Monte Carlo draws per weight vector
        batch: draws per batch
        rng: seeded generator

    Returns: one check per (weight vector, threshold), statistic is the
    empirical tail and threshold the bound

    """
    gamma = 0.1 + 0.9 * T.rand(n, generator=rng, dtype=DTYPE)
    sigma_bar = 0.5 + 2.0 * T.rand(n, generator=rng, dtype=DTYPE)
    extremes = EnsembleExtremes.from_vectors(gamma, sigma_bar)

    checks = []
    for index in range(alphas):
        alpha = T.randn(n, generator=rng, dtype=DTYPE)
        scale = math.sqrt(2 * extremes.eta_max) * T.linalg.vector_norm(
            alpha).item()
        thresholds = T.tensor(BERNSTEIN_MULTIPLES, dtype=DTYPE) * scale
        tails = weighted_sum_tails(alpha, gamma, sigma_bar, thresholds,
                                   trials, rng, batch=batch)

        for multiple, t, tail in zip(BERNSTEIN_MULTIPLES,
                                     thresholds.tolist(), tails.tolist()):
            bound = bernstein_bound(t, alpha, extremes).value
            checks.append(ValidationCheck(
                'bernstein', f'tail[alpha={index},t={multiple:g}sd]', tail,
                bound, tail <= bound))

    return checks


def validate_statistics(config: dict, groups=CHECK_GROUPS) -> pd.DataFrame:
    """
    Runs the statistical checks of the measurement model
    Args:
        config: run configuration, supplies the seed and the sample budgets
        groups: 'pdf' for the product law, mgf and isotropy checks,
            'bernstein' for the tail bound table

    Returns: DataFrame with columns group, check, statistic, threshold,
    passed

    """
    seed = config['seed']
    checks = []
    if 'pdf' in groups:
        checks += laplace_checks(config['ks_samples'],
                                 config['ks_threshold'],
                                 make_generator(derive_seed(seed, 'laplace')))
        checks.append(mgf_check(make_generator(derive_seed(seed, 'mgf'))))
        gamma = float(to_numpy(config['gamma']).max())
        sigma_bar = math.sqrt(config['sigma_a2']) * float(
            to_numpy(config['nu']).max())
        checks.append(isotropy_check(
            gamma, sigma_bar, config['isotropy_rows'], config['isotropy_dim'],
            config['isotropy_threshold'],
            make_generator(derive_seed(seed, 'isotropy'))))
    if 'bernstein' in groups:
        checks += bernstein_checks(
            config['bernstein_vars'], config['bernstein_alphas'],
            config['bernstein_trials'], config['bernstein_batch'],
            make_generator(derive_seed(seed, 'bernstein')))

    return pd.DataFrame([asdict(check) for check in checks],
                        columns=['group', 'check', 'statistic', 'threshold',
                                 'passed'])


def groups_for(experiment: str):
    if experiment == 'pdf_validate':
        return ('pdf',)
    if experiment == 'bernstein_validate':
        return ('bernstein',)
    return CHECK_GROUPS
