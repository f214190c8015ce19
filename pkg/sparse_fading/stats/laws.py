import math
from dataclasses import dataclass

import numpy as np
import torch as T

from sparse_fading.errors import DomainError, ParameterError
from sparse_fading.utils.tensor_utils import as_tensor


@dataclass(frozen=True)
class MixtureLaw:
    """
    Law of one effective entry B_ij: Laplace(sigma_bar) with probability
    gamma, an atom at 0 with probability 1 - gamma
    """
    gamma: float
    sigma_bar: float

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise ParameterError(f'gamma must lie in (0, 1], got {self.gamma}')
        if self.sigma_bar <= 0:
            raise ParameterError(f'sigma_bar must be positive, got '
                                 f'{self.sigma_bar}')

    @classmethod
    def from_node(cls, gamma, sigma, nu):
        return cls(gamma=float(gamma), sigma_bar=float(sigma) * float(nu))

    @property
    def atom_mass(self) -> float:
        return 1.0 - self.gamma

    @property
    def eta(self) -> float:
        """gamma sigma_bar^2, half the second moment"""
        return self.gamma * self.sigma_bar ** 2

    @property
    def second_moment(self) -> float:
        return 2.0 * self.eta


@dataclass(frozen=True)
class EnsembleExtremes:
    eta_max: float
    eta_min: float
    eta_tilde_max: float
    eta_tilde_min: float

    def __post_init__(self):
        if min(self.eta_min, self.eta_tilde_min) <= 0:
            raise ParameterError('ensemble extremes must be positive')
        if self.eta_min > self.eta_max or \
                self.eta_tilde_min > self.eta_tilde_max:
            raise ParameterError('min extremes exceed max extremes')

    @classmethod
    def from_vectors(cls, gamma, sigma_bar):
        """
        Args:
            gamma: per node transmission probabilities
            sigma_bar: per node Laplace scales sigma_j nu_j
        """
        gamma = as_tensor(gamma)
        sigma_bar = as_tensor(sigma_bar)
        eta = gamma * sigma_bar ** 2
        return cls(eta_max=eta.max().item(), eta_min=eta.min().item(),
                   eta_tilde_max=sigma_bar.max().item(),
                   eta_tilde_min=sigma_bar.min().item())

    @classmethod
    def from_laws(cls, laws):
        return cls.from_vectors([law.gamma for law in laws],
                                [law.sigma_bar for law in laws])

    @classmethod
    def iid(cls, gamma: float, sigma_bar: float):
        return cls.from_vectors([gamma], [sigma_bar])

    @property
    def ratio(self) -> float:
        return self.eta_max / self.eta_min


def check_scales(sigma_a, nu_h):
    if sigma_a <= 0 or nu_h <= 0:
        raise ParameterError(f'scales must be positive, got sigma_a='
                             f'{sigma_a}, nu_h={nu_h}')


def laplace_product_pdf(w, sigma_a: float, nu_h: float):
    """
    Density of w = h a with h ~ Rayleigh(nu_h), a ~ N(0, sigma_a^2): a
    Laplace law of scale sigma_a nu_h
    Args:
        w: point(s) to evaluate, float or tensor
        sigma_a: std of the Gaussian amplitude
        nu_h: Rayleigh scale of the channel

    Returns: density, same type as w

    """
    check_scales(sigma_a, nu_h)
    scale = sigma_a * nu_h
    if isinstance(w, T.Tensor):
        return T.exp(-w.abs() / scale) / (2.0 * scale)
    return np.exp(-np.abs(w) / scale) / (2.0 * scale)


def laplace_product_cdf(w, sigma_a: float, nu_h: float):
    """Closed form CDF of h a, accepts floats, numpy arrays and tensors"""
    check_scales(sigma_a, nu_h)
    scale = sigma_a * nu_h
    if isinstance(w, T.Tensor):
        tail = 0.5 * T.exp(-w.abs() / scale)
        return T.where(w < 0, tail, 1.0 - tail)
    tail = 0.5 * np.exp(-np.abs(w) / scale)
    return np.where(np.asarray(w) < 0, tail, 1.0 - tail)


def mixture_pdf(u: float, law: MixtureLaw) -> float:
    """Continuous part of the entry density, the atom at 0 excluded"""
    return law.gamma * math.exp(-abs(u) / law.sigma_bar) / (
            2.0 * law.sigma_bar)


def mixture_tail(t: float, law: MixtureLaw) -> float:
    """
    Pr(|u| > t) for an entry with the mixture law
    Args:
        t: threshold, t >= 0
        law: mixture law of the entry

    Returns: 1 at t = 0, gamma exp(-t / sigma_bar) for t > 0

    """
    if t < 0:
        raise DomainError(f'tail threshold must be nonnegative, got {t}')
    if t == 0:
        return 1.0
    return law.gamma * math.exp(-t / law.sigma_bar)


def subexp_tail_constant(law: MixtureLaw) -> float:
    """
    K1 such that Pr(|u| > t) <= exp(1 - t / K1) for every t >= 0. K1 =
    sigma_bar works since gamma <= 1 < e, which makes every entry
    sub-exponential.
    """
    return law.sigma_bar
