import math
from dataclasses import dataclass
from typing import Optional

import torch as T
from einops import reduce

from sparse_fading.errors import (DimensionError, EnumerationBudgetError,
                                  ParameterError)
from sparse_fading.utils.tensor_utils import DTYPE, as_tensor

GRID_MAX_NODES = 3


@dataclass(frozen=True, eq=False)
class DesignProblem:
    """
    Transmission design for nodes sharing sigma_a and the energy cap E
    Args:
        nu: Rayleigh scale of each node's channel, any order
        sigma_a2: common amplitude variance
        E_per_node: average energy available per node and transmission
        E_total: optional network budget
        N, M, k, epsilon: network size, transmissions, sparsity and failure
            budget used by the energy formulas
    """
    nu: T.Tensor
    sigma_a2: float = 1.0
    E_per_node: float = 1.0
    E_total: Optional[float] = None
    N: Optional[int] = None
    M: Optional[int] = None
    k: Optional[int] = None
    epsilon: float = 0.01

    def __post_init__(self):
        if self.nu.dim() != 1 or self.nu.numel() == 0:
            raise DimensionError('nu must be a nonempty vector')
        if (self.nu <= 0).any():
            raise ParameterError('channel scales must be positive')
        if self.sigma_a2 <= 0:
            raise ParameterError('sigma_a2 must be positive')

    @classmethod
    def build(cls, nu, **kwargs):
        return cls(nu=as_tensor(nu), **kwargs)

    @classmethod
    def from_config(cls, config: dict, nu=None):
        nu = config['nu'] if nu is None else nu
        nu = as_tensor(nu)
        if nu.dim() == 0:
            nu = nu.expand(config['N']).clone()
        return cls(nu=nu, sigma_a2=config['sigma_a2'],
                   E_per_node=config['E_per_node'],
                   E_total=config['E_total'], N=config['N'], M=config['M'],
                   k=config['k'], epsilon=config['epsilon'])

    @property
    def gamma_bar(self) -> float:
        return gamma_bar(self.E_per_node, self.sigma_a2)


def gamma_bar(E, sigma_a2: float) -> float:
    """
    Largest transmission probability the per node cap allows,
    min(1, E / sigma_a^2)
    """
    E = as_tensor(E).flatten()
    if E.numel() > 1 and not (E == E[0]).all():
        raise ParameterError('per node energy caps must be identical')
    E = E[0].item()
    if E <= 0 or sigma_a2 <= 0:
        raise ParameterError(f'need E > 0 and sigma_a2 > 0, got E={E}, '
                             f'sigma_a2={sigma_a2}')
    return min(1.0, E / sigma_a2)


def check_design(gamma: T.Tensor, nu: T.Tensor):
    if gamma.shape[-1] != nu.shape[-1]:
        raise DimensionError(f'{gamma.shape[-1]} probabilities for '
                             f'{nu.shape[-1]} channels')
    if (gamma <= 0).any() or (gamma > 1).any():
        raise ParameterError('transmission probabilities must lie in (0, 1]')
    if (nu <= 0).any():
        raise ParameterError('channel scales must be positive')


def psi(gamma, nu):
    """
    sqrt(max_j(gamma_j nu_j^2) max_j(nu_j^2) / min_j(gamma_j nu_j^2)^2), the
    factor by which the fading spread inflates M2
    Args:
        gamma: transmission probabilities, (..., N) for a batch of designs
        nu: channel scales, length N

    Returns: float for a single design, tensor of shape (...) for a batch

    """
    gamma = as_tensor(gamma)
    nu = as_tensor(nu)
    check_design(gamma, nu)

    weighted = gamma * nu ** 2
    top = reduce(weighted, '... n -> ...', 'max')
    bottom = reduce(weighted, '... n -> ...', 'min')
    value = T.sqrt(top * (nu ** 2).max() / bottom ** 2)
    return value.item() if value.dim() == 0 else value


def psi_optimal(nu, gamma_bar: float) -> float:
    """sqrt(nu_max^2 / (gamma_bar nu_min^2))"""
    nu = as_tensor(nu)
    return math.sqrt((nu.max() / nu.min()).item() ** 2 / gamma_bar)


def optimal_gamma(problem: DesignProblem) -> T.Tensor:
    """
    gamma_j = gamma_bar nu_0^2 / nu_j^2 with nu_0 the weakest channel scale,
    so that gamma_j nu_j^2 is the same at every node
    Returns: probabilities in the caller's node order
    """
    order = T.argsort(problem.nu)
    nu_sorted = problem.nu[order]
    gamma_sorted = problem.gamma_bar * nu_sorted[0] ** 2 / nu_sorted ** 2

    gamma = T.empty_like(gamma_sorted)
    gamma[order] = gamma_sorted
    return gamma


def grid_search_gamma(nu, step=0.01, gamma_bar=1.0):
    """
    Exhaustive minimization of psi over the grid {step, 2 step, ..,
    gamma_bar}^N, only for N <= 3
    Returns: (best gamma, best psi)
    """
    nu = as_tensor(nu)
    if nu.numel() > GRID_MAX_NODES:
        raise EnumerationBudgetError(f'grid search is limited to '
                                     f'{GRID_MAX_NODES} nodes, got '
                                     f'{nu.numel()}')
    levels = int(round(gamma_bar / step))
    values = step * T.arange(1, levels + 1, dtype=DTYPE)
    grids = T.meshgrid(*[values] * nu.numel(), indexing='ij')
    candidates = T.stack([g.flatten() for g in grids], dim=-1)

    scores = psi(candidates, nu)
    best = T.argmin(scores)
    return candidates[best], scores[best].item()


def random_search_gamma(nu, trials: int, generator: T.Generator,
                        gamma_bar=1.0, low=1e-3):
    """
    Draws trials designs with gamma_j uniform in [low, gamma_bar]
    Returns: (candidates, psi of each candidate)
    """
    nu = as_tensor(nu)
    u = T.rand((trials, nu.numel()), generator=generator, dtype=DTYPE)
    candidates = low + (gamma_bar - low) * u
    return candidates, psi(candidates, nu)
