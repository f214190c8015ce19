import math
from dataclasses import dataclass

from sparse_fading.bounds.measurement import corollary_iid_bound
from sparse_fading.errors import InfeasibleError, ParameterError


@dataclass(frozen=True)
class EnergyReport:
    gamma_star: float
    M: float
    E_required: float
    E_total: float

    @property
    def feasible(self) -> bool:
        return self.E_required <= self.E_total * (1 + 1e-12)


def required_energy(M: float, gamma: float, N: int, sigma_a2: float) -> float:
    """Average network energy M gamma N sigma_a^2 spent by M transmissions"""
    if M < 0 or gamma < 0 or N < 0 or sigma_a2 < 0:
        raise ParameterError('energy inputs must be nonnegative')
    return M * gamma * N * sigma_a2


def max_gamma_under_budget(E_bar: float, C0: float, sigma_a2: float, k: int,
                           N: int, epsilon: float) -> float:
    """
    Largest gamma whose required energy at M = C0 k / sqrt(gamma)
    ln(2N/eps) stays within E_bar
    Returns: min(1, E_bar / (C0 sigma_a^2 k N ln(2N/eps)))^2
    """
    if min(C0, sigma_a2, k, N) <= 0 or E_bar < 0:
        raise ParameterError('budget inputs must be positive')
    root = E_bar / (C0 * sigma_a2 * k * N * math.log(2 * N / epsilon))
    return min(1.0, root) ** 2


def energy_report(E_bar: float, sigma_a2: float, k: int, N: int,
                  epsilon: float, C0=1.0) -> EnergyReport:
    """
    Budget limited gamma, the identical node measurement count at that
    gamma and the energy the network then spends
    """
    gamma_star = max_gamma_under_budget(E_bar, C0, sigma_a2, k, N, epsilon)
    if gamma_star == 0.0:
        raise InfeasibleError('a zero energy budget admits no transmission')
    M = corollary_iid_bound(k, N, gamma_star, epsilon, C0=C0)
    return EnergyReport(gamma_star=gamma_star, M=M,
                        E_required=required_energy(M, gamma_star, N,
                                                   sigma_a2),
                        E_total=E_bar)
