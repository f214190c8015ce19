import math
from dataclasses import dataclass
from typing import Optional

from sparse_fading.errors import DegenerateError, DomainError, ParameterError

K_MODES = ('sublinear', 'linear')
COUPLINGS = ('gamma_k_const', 'gamma_k_linear')

EXPRESSIONS = {
    ('gamma_k_const', 'sublinear'): 'k^(3/2) ln N',
    ('gamma_k_const', 'linear'): 'N^(3/2) ln N',
    ('gamma_k_linear', 'sublinear'): 'k^(3/2) / sqrt(eps N) ln N',
    ('gamma_k_linear', 'linear'): 'N / sqrt(eps) ln N',
}


@dataclass(frozen=True)
class ScalingRegime:
    """
    Order of the measurement count when gamma k is held constant
    (gamma_k_const) or grows like eps N (gamma_k_linear), for k = o(N)
    (sublinear) or k = Theta(N) (linear)
    """
    k_mode: str
    coupling: str
    epsilon_tilde: Optional[float] = None

    @property
    def expression(self) -> str:
        return EXPRESSIONS[self.coupling, self.k_mode]

    def evaluate(self, k: int, N: int) -> float:
        if self.coupling == 'gamma_k_linear':
            check_epsilon_tilde(self.epsilon_tilde, k, N)
        log_n = math.log(N)

        if self.coupling == 'gamma_k_const':
            size = k if self.k_mode == 'sublinear' else N
            return size ** 1.5 * log_n
        if self.k_mode == 'sublinear':
            return k ** 1.5 / math.sqrt(self.epsilon_tilde * N) * log_n
        return N / math.sqrt(self.epsilon_tilde) * log_n


def check_epsilon_tilde(epsilon_tilde, k: int, N: int):
    if epsilon_tilde is None or not 0 < epsilon_tilde < k / N:
        raise DomainError(f'epsilon_tilde must lie in (0, k/N) = '
                          f'(0, {k / N}), got {epsilon_tilde}')


def table1_regime(k_mode: str, coupling: str, epsilon_tilde=None, k=None,
                  N=None) -> ScalingRegime:
    """
    Scaling of M in the gamma k regimes
    Args:
        k_mode: 'sublinear' or 'linear' growth of k with N
        coupling: 'gamma_k_const' (gamma k = tau_0) or 'gamma_k_linear'
            (gamma k = epsilon_tilde N)
        epsilon_tilde: growth rate of gamma k, needed for 'gamma_k_linear'
        k: sparsity, checks epsilon_tilde < k / N when given with N
        N: dimension

    Returns: ScalingRegime with the symbolic order and its evaluator

    """
    if k_mode not in K_MODES:
        raise ParameterError(f'k_mode must be one of {K_MODES}, got '
                             f'{k_mode!r}')
    if coupling not in COUPLINGS:
        raise ParameterError(f'coupling must be one of {COUPLINGS}, got '
                             f'{coupling!r}')
    if coupling == 'gamma_k_linear':
        if epsilon_tilde is None or epsilon_tilde <= 0:
            raise DomainError('gamma_k_linear needs epsilon_tilde > 0')
        if k is not None and N is not None:
            check_epsilon_tilde(epsilon_tilde, k, N)

    return ScalingRegime(k_mode=k_mode, coupling=coupling,
                         epsilon_tilde=epsilon_tilde)


def general_subexp_beta(N: int, rho_max: float, R1: float, eps1: float,
                        c1=1.0) -> float:
    log_term = math.log(2 * N / eps1)
    return min(math.sqrt(c1 / log_term) / rho_max,
               c1 / (rho_max * R1 * log_term))


def general_subexp_bound(k: int, N: int, lambda_min: float, rho_max: float,
                         T0: float, R1: float, eps1=0.01, eps1_prime=0.01,
                         c1=1.0, c1_prime=1.0) -> float:
    """
    Measurement count for independent sub-exponential entries with a common
    row second moment matrix
    Args:
        k: sparsity
        N: dimension
        lambda_min: smallest eigenvalue of Sigma^T Sigma
        rho_max: largest sub-exponential norm of the entries
        T0: bound on the squared row norms of B_S
        R1: almost sure bound on ||b_S||_inf / ||b_S||_2
        eps1: failure budget of the certificate event
        eps1_prime: failure budget of the conditioning event
        c1: absolute constant of the Bernstein step
        c1_prime: absolute constant of the singular value step

    Returns: (1 / lambda_min) (sqrt(k) / beta_1 +
    sqrt(T0 ln(k / eps1') / c1'))^2

    """
    if lambda_min <= 0:
        raise DegenerateError(f'row second moment matrix is singular, '
                              f'lambda_min={lambda_min}')
    if min(rho_max, T0, c1, c1_prime) <= 0:
        raise ParameterError('rho_max, T0, c1 and c1_prime must be positive')
    if not 0 < R1 <= 1:
        raise ParameterError(f'R1 must lie in (0, 1], got {R1}')
    if not (0 < eps1 < 1 and 0 < eps1_prime < 1):
        raise ParameterError('failure budgets must lie in (0, 1)')

    beta = general_subexp_beta(N, rho_max, R1, eps1, c1)
    return (math.sqrt(k) / beta + math.sqrt(
        T0 * math.log(k / eps1_prime) / c1_prime)) ** 2 / lambda_min


def general_subexp_scaling(k: int, N: int, lambda_min: float,
                           rho_max: float, R1: float, eps1=0.01, c1=1.0):
    """
    Leading order (rho_max^2 / lambda_min) k max(ln(2N/eps1) / c1,
    R1^2 ln^2(2N/eps1) / c1^2)
    Returns: (scaling, 'log' or 'log_squared')
    """
    if lambda_min <= 0:
        raise DegenerateError('row second moment matrix is singular')
    log_term = math.log(2 * N / eps1)
    scaling = rho_max ** 2 / lambda_min * k * max(
        log_term / c1, (R1 * log_term / c1) ** 2)
    regime = 'log' if R1 <= 1 / math.sqrt(math.log(N)) else 'log_squared'
    return scaling, regime
