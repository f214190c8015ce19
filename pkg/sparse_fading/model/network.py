from dataclasses import dataclass
from typing import Optional

import torch as T

from sparse_fading.errors import DimensionError, ParameterError
from sparse_fading.stats.laws import EnsembleExtremes
from sparse_fading.utils.tensor_utils import DTYPE, as_tensor


@dataclass(frozen=True, eq=False)
class NetworkConfig:
    """
    Per node transmission parameters of the sensor network
    Args:
        N: number of nodes
        M: number of MAC transmissions
        gamma: probability of transmission per node, in (0, 1]
        sigma: amplitude std per node
        nu: Rayleigh scale of each node's channel
        sigma_v2: receiver noise variance
        energy_cap: optional per node average power cap E_j
        total_energy: optional network budget E_bar
    """
    N: int
    M: int
    gamma: T.Tensor
    sigma: T.Tensor
    nu: T.Tensor
    sigma_v2: float = 0.0
    energy_cap: Optional[T.Tensor] = None
    total_energy: Optional[float] = None

    def __post_init__(self):
        if self.N < 1 or self.M < 1:
            raise DimensionError(f'need N, M >= 1, got N={self.N}, '
                                 f'M={self.M}')
        for name in ('gamma', 'sigma', 'nu'):
            if getattr(self, name).shape != (self.N,):
                raise DimensionError(f'{name} must have length N={self.N}')
        if ((self.gamma <= 0) | (self.gamma > 1)).any():
            raise ParameterError('transmission probabilities must lie in '
                                 '(0, 1]')
        if (self.sigma <= 0).any() or (self.nu <= 0).any():
            raise ParameterError('sigma and nu must be strictly positive')
        if self.sigma_v2 < 0:
            raise ParameterError('noise variance must be nonnegative')
        if self.energy_cap is not None:
            if self.energy_cap.shape != (self.N,):
                raise DimensionError('energy_cap must have length N')
            # small slack for caps computed as gamma * sigma^2 themselves
            if (self.mean_power > self.energy_cap * (1 + 1e-12)).any():
                raise ParameterError('gamma_j sigma_j^2 exceeds the node '
                                     'energy cap')
        if self.total_energy is not None and self.total_energy < 0:
            raise ParameterError('total energy must be nonnegative')

    @classmethod
    def build(cls, N, M, gamma=1.0, sigma=1.0, nu=1.0, sigma_v2=0.0,
              energy_cap=None, total_energy=None):
        """Broadcasts scalar per node values to length N vectors"""
        return cls(N=N, M=M,
                   gamma=broadcast(gamma, N),
                   sigma=broadcast(sigma, N),
                   nu=broadcast(nu, N),
                   sigma_v2=float(sigma_v2),
                   energy_cap=None if energy_cap is None else broadcast(
                       energy_cap, N),
                   total_energy=total_energy)

    @classmethod
    def from_config(cls, config: dict, nu=None, gamma=None, M=None):
        """
        Builds the network from a run configuration
        Args:
            config: configuration dict, see utils.config
            nu: channel scales overriding config['nu']
            gamma: transmission probabilities overriding config['gamma']
            M: number of transmissions overriding config['M']
        """
        return cls.build(N=config['N'],
                         M=config['M'] if M is None else M,
                         gamma=config['gamma'] if gamma is None else gamma,
                         sigma=config['sigma_a2'] ** 0.5,
                         nu=config['nu'] if nu is None else nu,
                         sigma_v2=config['sigma_v2'],
                         energy_cap=config['energy_cap'],
                         total_energy=config['total_energy'])

    def to_config(self) -> dict:
        sigma_a2 = (self.sigma ** 2).unique()
        if sigma_a2.numel() != 1:
            raise ParameterError('only a common sigma_a is expressible as '
                                 'key=value config')
        return {'N': self.N, 'M': self.M,
                'gamma': compact(self.gamma),
                'sigma_a2': sigma_a2.item(),
                'nu': compact(self.nu),
                'sigma_v2': self.sigma_v2,
                'energy_cap': None if self.energy_cap is None else compact(
                    self.energy_cap),
                'total_energy': self.total_energy}

    @property
    def sigma_bar(self) -> T.Tensor:
        """Laplace scale of each node's nonzero entries, sigma_j nu_j"""
        return self.sigma * self.nu

    @property
    def eta(self) -> T.Tensor:
        return self.gamma * self.sigma_bar ** 2

    @property
    def mean_power(self) -> T.Tensor:
        return self.gamma * self.sigma ** 2

    @property
    def mean_gamma(self) -> float:
        return self.gamma.mean().item()

    def extremes(self) -> EnsembleExtremes:
        return EnsembleExtremes.from_vectors(self.gamma, self.sigma_bar)

    def is_identical(self) -> bool:
        """True in the iid case gamma_j = gamma, sigma_bar_j = sigma_bar"""
        return bool((self.gamma == self.gamma[0]).all()
                    and T.allclose(self.sigma_bar, self.sigma_bar[0]))


def broadcast(value, n: int) -> T.Tensor:
    value = as_tensor(value)
    if value.dim() == 0:
        return value.expand(n).clone()
    if value.shape != (n,):
        raise DimensionError(f'expected a scalar or {n} values, got shape '
                             f'{tuple(value.shape)}')
    return value.clone()


def compact(vector: T.Tensor):
    """Scalar when all entries agree, tuple otherwise"""
    if (vector == vector[0]).all():
        return vector[0].item()
    return tuple(vector.tolist())


def nonidentical_nu(n: int, nu_min: float, nu_max: float, rng: T.Generator,
                    sort=False) -> T.Tensor:
    """Channel scales drawn uniformly from [nu_min, nu_max]"""
    if not 0 < nu_min <= nu_max:
        raise ParameterError(f'need 0 < nu_min <= nu_max, got {nu_min}, '
                             f'{nu_max}')
    nu = nu_min + (nu_max - nu_min) * T.rand(n, generator=rng, dtype=DTYPE)
    if sort:
        nu = nu.sort().values
    return nu


def random_gamma(n: int, rng: T.Generator, low=0.05,
                 high=1.0) -> T.Tensor:
    """Transmission probabilities chosen independently of the channels"""
    if not 0 < low <= high <= 1:
        raise ParameterError(f'need 0 < low <= high <= 1, got {low}, {high}')
    return low + (high - low) * T.rand(n, generator=rng, dtype=DTYPE)
