import math
from dataclasses import dataclass

import numpy as np
import torch as T
from einops import rearrange, reduce
from scipy import integrate, stats

from sparse_fading.errors import (DegenerateError, DivergenceError,
                                  DomainError, InputError)
from sparse_fading.stats.laws import (EnsembleExtremes, MixtureLaw,
                                      mixture_pdf)
from sparse_fading.stats.sampling import sample_mixture
from sparse_fading.utils.tensor_utils import as_tensor, to_numpy


@dataclass(frozen=True)
class TailBound:
    raw: float

    @property
    def value(self) -> float:
        """Bound clamped to a probability"""
        return min(max(self.raw, 0.0), 1.0)


def mgf_exact(t: float, law: MixtureLaw) -> float:
    """
    E exp(t u) = 1 + gamma sigma_bar^2 t^2 / (1 - sigma_bar^2 t^2), finite
    only for |t| < 1 / sigma_bar
    """
    st2 = (law.sigma_bar * t) ** 2
    if st2 >= 1.0:
        raise DivergenceError(f'mgf diverges for |t| >= 1/sigma_bar = '
                              f'{1.0 / law.sigma_bar}, got t={t}')
    return 1.0 + law.gamma * st2 / (1.0 - st2)


def mgf_quadrature(t: float, law: MixtureLaw) -> float:
    """Numerical E exp(t u), the Laplace part integrated on each half line"""

    def integrand(u):
        return math.exp(t * u) * law.gamma * math.exp(
            -abs(u) / law.sigma_bar) / (2.0 * law.sigma_bar)

    negative, _ = integrate.quad(integrand, -np.inf, 0.0, epsabs=0,
                                 epsrel=1e-12, limit=200)
    positive, _ = integrate.quad(integrand, 0.0, np.inf, epsabs=0,
                                 epsrel=1e-12, limit=200)
    return negative + positive + law.atom_mass


def mixture_mass(law: MixtureLaw) -> float:
    """Total probability of the mixture, the continuous part by quadrature"""
    negative, _ = integrate.quad(mixture_pdf, -np.inf, 0.0, args=(law,),
                                 epsabs=0, epsrel=1e-12, limit=200)
    positive, _ = integrate.quad(mixture_pdf, 0.0, np.inf, args=(law,),
                                 epsabs=0, epsrel=1e-12, limit=200)
    return negative + positive + law.atom_mass


def mgf_bound(t: float, extremes: EnsembleExtremes) -> float:
    """
    exp(eta_max t^2), valid for |t| <= 1 / eta_tilde_max
    Args:
        t: mgf argument
        extremes: extremes of the node laws in the ensemble
    """
    if abs(t) > 1.0 / extremes.eta_tilde_max:
        raise DomainError(f'|t| must not exceed 1/eta_tilde_max = '
                          f'{1.0 / extremes.eta_tilde_max}, got {t}')
    return math.exp(extremes.eta_max * t ** 2)


def mgf_envelope(t: float, extremes: EnsembleExtremes) -> float:
    """
    exp(eta_max t^2 / (1 - eta_tilde_max^2 t^2)), an upper bound on the mgf
    of every node law that holds on the whole window |t| < 1/eta_tilde_max.
    mgf_bound drops the denominator and undercuts the law attaining eta_max.
    """
    st2 = (extremes.eta_tilde_max * t) ** 2
    if st2 >= 1.0:
        raise DomainError(f'|t| must be below 1/eta_tilde_max = '
                          f'{1.0 / extremes.eta_tilde_max}, got {t}')
    return math.exp(extremes.eta_max * t ** 2 / (1.0 - st2))


def bernstein_exponent(t: float, alpha, extremes: EnsembleExtremes) -> float:
    alpha = as_tensor(alpha)
    l2_sq = T.sum(alpha ** 2).item()
    l_inf = alpha.abs().max().item() if alpha.numel() else 0.0
    if l_inf == 0.0:
        raise DegenerateError('alpha must have a nonzero entry')
    if t <= 0:
        raise DomainError(f't must be positive, got {t}')

    return min(t ** 2 / (4.0 * extremes.eta_max * l2_sq),
               t / (2.0 * extremes.eta_tilde_max * l_inf))


def bernstein_bound(t: float, alpha, extremes: EnsembleExtremes) -> TailBound:
    """
    Bernstein type bound on Pr(|sum_i alpha_i u_i| >= t) for independent
    mixture entries u_i
    Args:
        t: deviation, t > 0
        alpha: weights, not all zero
        extremes: extremes of the node laws

    Returns: TailBound, raw = 2 exp(-min(t^2 / (4 eta_max ||alpha||_2^2),
    t / (2 eta_tilde_max ||alpha||_inf)))

    """
    return TailBound(raw=2.0 * math.exp(-bernstein_exponent(t, alpha,
                                                            extremes)))


def subexp_norm_estimate(samples, p_max=10) -> float:
    """
    Empirical sub-exponential norm, max over integer p in [1, p_max] of
    (mean |x|^p)^(1/p) / p
    Args:
        samples: draws of the variable
        p_max: largest moment order used

    Returns: estimate of ||x||_psi1

    """
    samples = as_tensor(samples).flatten()
    if samples.numel() == 0:
        raise InputError('need at least one sample')
    if p_max < 1:
        raise InputError(f'p_max must be >= 1, got {p_max}')

    log_abs = T.log(samples.abs())
    log_n = math.log(samples.numel())
    best = 0.0
    for p in range(1, int(p_max) + 1):
        # log-sum-exp keeps high moments of large samples finite
        log_moment = (T.logsumexp(p * log_abs, dim=0).item() - log_n) / p
        best = max(best, math.exp(log_moment) / p)

    return best


def empirical_tail(samples, t: float, inclusive=False) -> float:
    """Fraction of |samples| above t, or at least t when inclusive"""
    samples = as_tensor(samples).abs()
    hits = samples >= t if inclusive else samples > t
    return hits.to(samples.dtype).mean().item()


def weighted_sum_tails(alpha, gamma, sigma_bar, thresholds, trials: int,
                       generator: T.Generator, batch=100_000) -> T.Tensor:
    """
    Monte Carlo Pr(|sum_i alpha_i u_i| >= t) for independent mixture
    entries, drawn in batches
    Args:
        alpha: weights, length n
        gamma: per variable activation probabilities, length n
        sigma_bar: per variable Laplace scales, length n
        thresholds: deviations t to evaluate
        trials: number of draws of the weighted sum
        generator: seeded torch generator
        batch: draws per batch

    Returns: tensor of empirical tail probabilities, one per threshold

    """
    alpha = as_tensor(alpha)
    thresholds = as_tensor(thresholds)
    n = alpha.numel()
    counts = T.zeros(thresholds.numel(), dtype=T.int64)

    done = 0
    while done < trials:
        size = min(batch, trials - done)
        u = sample_mixture(as_tensor(gamma), as_tensor(sigma_bar), (size, n),
                           generator)
        sums = rearrange((u @ alpha).abs(), 'trial -> trial 1')
        hits = sums >= rearrange(thresholds, 't -> 1 t')
        counts += reduce(hits.long(), 'trial t -> t', 'sum')
        done += size

    return counts.to(T.float64) / trials


def ks_statistic(samples, cdf) -> float:
    """Kolmogorov-Smirnov distance between samples and a closed form cdf"""
    return float(stats.kstest(to_numpy(samples), cdf).statistic)


def isotropy_deviation(rows, scale: float) -> float:
    """
    Spectral distance between the sample second moment matrix of
    rows / scale and the identity
    Args:
        rows: (num_rows, dim) draws of a random vector
        scale: normalization, sqrt(2 gamma sigma_bar^2) in the iid case
    """
    rows = as_tensor(rows) / scale
    second_moment = rows.T @ rows / rows.shape[0]
    identity = T.eye(rows.shape[1], dtype=rows.dtype)
    return T.linalg.matrix_norm(second_moment - identity, ord=2).item()


def max_offdiagonal_correlation(rows) -> float:
    """Largest absolute sample correlation between distinct coordinates"""
    rows = as_tensor(rows)
    correlation = T.corrcoef(rows.T)
    correlation.fill_diagonal_(0.0)
    return correlation.abs().max().item()
