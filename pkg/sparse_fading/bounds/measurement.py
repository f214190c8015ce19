import math
from dataclasses import dataclass
from typing import Optional

from scipy import optimize

from sparse_fading.errors import (DegenerateError, DomainError,
                                  ParameterError)
from sparse_fading.solver.certificate import certificate_vector
from sparse_fading.stats.concentration import TailBound, bernstein_bound
from sparse_fading.stats.laws import EnsembleExtremes
from sparse_fading.utils.tensor_utils import as_tensor


@dataclass(frozen=True)
class BoundInputs:
    """
    Arguments of the measurement count bounds for nonidentical fading
    Args:
        k: sparsity
        N: signal dimension
        extremes: eta / eta_tilde extremes of the node laws
        epsilon: failure budget of the certificate event
        epsilon_prime: failure budget of the conditioning event
        c_prime: absolute constant of the singular value concentration
        R: peak to total energy ratio of b_S, estimated from k and M if None
    """
    k: int
    N: int
    extremes: EnsembleExtremes
    epsilon: float = 0.01
    epsilon_prime: float = 0.01
    c_prime: float = 1.0
    R: Optional[float] = None

    def __post_init__(self):
        if self.k < 1:
            raise DegenerateError(f'bounds need k >= 1, got k={self.k}')
        if self.N < self.k:
            raise ParameterError(f'need N >= k, got N={self.N}, k={self.k}')
        for name in ('epsilon', 'epsilon_prime'):
            if not 0 < getattr(self, name) < 1:
                raise ParameterError(f'{name} must lie in (0, 1)')
        if self.c_prime <= 0:
            raise ParameterError('c_prime must be positive')
        if self.R is not None and not 0 < self.R <= 1:
            raise ParameterError(f'R must lie in (0, 1], got {self.R}')

    @classmethod
    def from_config(cls, config: dict, extremes: EnsembleExtremes):
        return cls(k=config['k'], N=config['N'], extremes=extremes,
                   epsilon=config['epsilon'],
                   epsilon_prime=config['epsilon_prime'],
                   c_prime=config['c_prime'], R=config['R'])

    @property
    def log_term(self) -> float:
        """ln(2N / epsilon)"""
        return math.log(2 * self.N / self.epsilon)

    @property
    def confidence_term(self) -> float:
        """sqrt(ln(k / epsilon') / (2 c'))"""
        return math.sqrt(math.log(self.k / self.epsilon_prime) /
                         (2 * self.c_prime))


@dataclass(frozen=True)
class BoundReport:
    M1: float
    M2: float
    M_required: float
    dominant: bool
    C1: float
    C2: float
    psi: float
    R: float
    scaling_notes: str


@dataclass(frozen=True)
class FadingPenalty:
    """
    C1 = nu_max^2 / nu_min^2 prices the fading spread when gamma is
    matched to the channels, C2 = C1^2 when every node always transmits
    """
    C1: float
    C2: float

    def designed_scaling(self, gamma_bar: float, k: int, N: int,
                         epsilon: float) -> float:
        return math.sqrt(self.C1 / gamma_bar) * k * math.log(2 * N / epsilon)

    def dense_scaling(self, k: int, N: int, epsilon: float) -> float:
        return self.C2 * k * math.log(2 * N / epsilon)


def theorem1_m1(inputs: BoundInputs) -> float:
    e = inputs.extremes
    ratio = e.eta_max / e.eta_min
    return ratio * 2 * inputs.k * (math.sqrt(ratio) * math.sqrt(
        inputs.log_term) + inputs.confidence_term) ** 2


def theorem1_m2(inputs: BoundInputs, R: float) -> float:
    e = inputs.extremes
    ratio = e.eta_max / e.eta_min
    return ratio * 2 * inputs.k * (e.eta_tilde_max / math.sqrt(e.eta_min) *
                                   R * inputs.log_term +
                                   inputs.confidence_term) ** 2


def analytic_R(k: int, M: float) -> float:
    """sqrt(k / 2M), clamped to (0, 1]"""
    if k < 1 or M <= 0:
        raise ParameterError(f'need k >= 1 and M > 0, got k={k}, M={M}')
    return min(math.sqrt(k / (2.0 * M)), 1.0)


def empirical_R(B, support, signs) -> float:
    """||b_S||_inf / ||b_S||_2 for a realized B_S and sign pattern"""
    b_S = certificate_vector(B, support, signs)
    return (b_S.abs().max() / b_S.norm()).item()


def estimate_R(k=None, M=None, B=None, support=None, signs=None) -> float:
    """
    Peak to total energy ratio of b_S. The realized value when B and the
    support are given, the sqrt(k / 2M) estimate from k and M otherwise.
    """
    if B is not None:
        if support is None or signs is None:
            raise ParameterError('empirical R needs the support and signs')
        return empirical_R(B, support, signs)
    if k is None or M is None:
        raise ParameterError('analytic R needs k and M')
    return analytic_R(k, M)


def psi_from_extremes(extremes: EnsembleExtremes) -> float:
    """sqrt(eta_max eta_tilde_max^2) / eta_min, the M2 scaling coefficient"""
    return math.sqrt(extremes.eta_max) * extremes.eta_tilde_max / \
        extremes.eta_min


def fading_penalty(nu) -> FadingPenalty:
    nu = as_tensor(nu)
    if (nu <= 0).any():
        raise ParameterError('channel scales must be positive')
    c1 = (nu.max() / nu.min()).item() ** 2
    return FadingPenalty(C1=c1, C2=c1 ** 2)


def m1_dominates(extremes: EnsembleExtremes) -> bool:
    """eta_min <= eta_max sqrt(eta_max) / eta_tilde_max"""
    e = extremes
    return e.eta_min <= e.eta_max * math.sqrt(e.eta_max) / e.eta_tilde_max


def dominant_scalings(extremes: EnsembleExtremes, k: int, N: int,
                      epsilon: float):
    """
    Leading orders of M1 and M2 once the constants are dropped
    Returns: (M1 scaling, M2 scaling)
    """
    log_term = math.log(2 * N / epsilon)
    m1 = (extremes.eta_max / extremes.eta_min) ** 2 * k * log_term
    m2 = psi_from_extremes(extremes) * k * log_term
    return m1, m2


def theorem1_bounds(inputs: BoundInputs, passes=2) -> BoundReport:
    """
    Measurement counts M1 and M2 that together guarantee recovery of a
    fixed k-sparse signal
    Args:
        inputs: bound arguments, R taken from inputs when set
        passes: evaluations of M2 when R is estimated; the first uses
            R = 1, each later one R = sqrt(k / 2M) at the previous M

    Returns: BoundReport

    """
    if passes < 1:
        raise ParameterError('passes must be >= 1')
    m1 = theorem1_m1(inputs)
    if inputs.R is not None:
        R = inputs.R
        m2 = theorem1_m2(inputs, R)
    else:
        R = 1.0
        m2 = theorem1_m2(inputs, R)
        for _ in range(passes - 1):
            R = analytic_R(inputs.k, max(m1, m2))
            m2 = theorem1_m2(inputs, R)

    penalty = FadingPenalty(
        C1=(inputs.extremes.eta_tilde_max /
            inputs.extremes.eta_tilde_min) ** 2,
        C2=(inputs.extremes.eta_tilde_max /
            inputs.extremes.eta_tilde_min) ** 4)
    dominant = m1_dominates(inputs.extremes)
    m1_order, m2_order = dominant_scalings(inputs.extremes, inputs.k,
                                           inputs.N, inputs.epsilon)
    notes = (f'M1 ~ {m1_order:.4g}, M2 ~ {m2_order:.4g} up to constants; '
             f'{"M1" if dominant else "M2"} dominates')

    return BoundReport(M1=m1, M2=m2, M_required=max(m1, m2),
                       dominant=dominant, C1=penalty.C1, C2=penalty.C2,
                       psi=psi_from_extremes(inputs.extremes), R=R,
                       scaling_notes=notes)


def corollary_iid_bound(k: int, N: int, gamma: float, epsilon: float,
                        C0=1.0) -> float:
    """C0 (k / sqrt(gamma)) ln(2N / epsilon), identical nodes"""
    if not 0 < gamma <= 1:
        raise DomainError(f'gamma must lie in (0, 1], got {gamma}')
    return C0 * k / math.sqrt(gamma) * math.log(2 * N / epsilon)


def certificate_failure_bound(b_S, extremes: EnsembleExtremes,
                              N: int) -> TailBound:
    """
    Union bound over the N columns on Pr(max_l |<b_l, b_S>| >= 1) for a
    realized certificate vector
    """
    return TailBound(raw=N * bernstein_bound(1.0, b_S, extremes).raw)


def gamma_dominance_threshold(R: float, N: int, epsilon: float, k=10,
                              epsilon_prime=0.01, c_prime=1.0,
                              sigma_bar=1.0, xtol=1e-12) -> float:
    """
    gamma_0 such that M2 > M1 for every gamma < gamma_0 when all nodes
    share gamma and sigma_bar, at a fixed R
    Returns: gamma_0 in (0, 1], 1 when M2 dominates at every gamma
    """
    if not 0 < R <= 1:
        raise ParameterError(f'R must lie in (0, 1], got {R}')

    def gap(gamma):
        inputs = BoundInputs(k=k, N=N,
                             extremes=EnsembleExtremes.iid(gamma, sigma_bar),
                             epsilon=epsilon, epsilon_prime=epsilon_prime,
                             c_prime=c_prime, R=R)
        return theorem1_m2(inputs, R) - theorem1_m1(inputs)

    if gap(1.0) >= 0:
        return 1.0
    return optimize.bisect(gap, 1e-15, 1.0, xtol=xtol)
