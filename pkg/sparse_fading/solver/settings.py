from dataclasses import dataclass, replace
from typing import Optional

import torch as T

from sparse_fading.errors import ParameterError
from sparse_fading.model.signal import SparseSignal
from sparse_fading.solver.certificate import Certificate
from sparse_fading.utils.tensor_utils import relative_error

STATUSES = ('converged', 'max_iterations', 'stalled')


@dataclass(frozen=True)
class SolverSettings:
    """
    Args:
        tolerance: surrogate duality gap target of basis pursuit
        max_iterations: cap on primal-dual iterations
        barrier_mu: factor by which the barrier weight grows
        backtrack_alpha: sufficient decrease fraction of the line search
        backtrack_beta: step shrink factor of the line search
        max_backtracks: line search attempts before the solve is stalled
        regularization: relative floor added to the Newton system diagonal
        barrier_tolerance: duality gap target of the log-barrier BPDN solve
        newton_max_iterations: Newton steps per barrier weight
        feasibility_tolerance: relative residual above which the starting
            point is declared infeasible
        polish: refit basis pursuit output by least squares on its support
        exact_threshold: relative error below which recovery is exact
    """
    tolerance: float = 1e-8
    max_iterations: int = 100
    barrier_mu: float = 10.0
    backtrack_alpha: float = 0.01
    backtrack_beta: float = 0.5
    max_backtracks: int = 32
    regularization: float = 1e-12
    barrier_tolerance: float = 1e-3
    newton_max_iterations: int = 50
    feasibility_tolerance: float = 1e-6
    polish: bool = True
    exact_threshold: float = 1e-4

    def __post_init__(self):
        if min(self.tolerance, self.barrier_tolerance,
               self.exact_threshold, self.feasibility_tolerance) <= 0:
            raise ParameterError('tolerances and thresholds must be positive')
        if min(self.max_iterations, self.max_backtracks,
               self.newton_max_iterations) < 1:
            raise ParameterError('iteration caps must be >= 1')
        if not 0 < self.backtrack_alpha < 0.5:
            raise ParameterError('backtrack_alpha must lie in (0, 0.5)')
        if not 0 < self.backtrack_beta < 1:
            raise ParameterError('backtrack_beta must lie in (0, 1)')
        if self.barrier_mu <= 1:
            raise ParameterError('barrier_mu must exceed 1')
        if self.regularization < 0:
            raise ParameterError('regularization must be nonnegative')

    @classmethod
    def from_config(cls, config: dict):
        return cls(**{name: config[name]
                      for name in cls.__dataclass_fields__})


@dataclass(frozen=True, eq=False)
class RecoveryResult:
    """
    Output of a recovery engine. relative_error, exact and certificate stay
    None until the result is scored against the true signal.
    """
    x_hat: T.Tensor
    iterations: int
    duality_gap: float
    status: str
    residual: float
    relative_error: Optional[float] = None
    exact: Optional[bool] = None
    certificate: Optional[Certificate] = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ParameterError(f'unknown solver status {self.status!r}')

    @property
    def converged(self) -> bool:
        return self.status == 'converged'

    def support(self, tol=1e-6) -> T.Tensor:
        """Indices where |x_hat| exceeds tol times its largest entry"""
        peak = self.x_hat.abs().max().item() if self.x_hat.numel() else 0.0
        if peak == 0.0:
            return T.zeros(0, dtype=T.int64)
        return T.nonzero(self.x_hat.abs() > tol * peak).flatten()

    def score(self, x: SparseSignal, threshold: float,
              certificate: Optional[Certificate] = None) -> 'RecoveryResult':
        error = relative_error(x.values, self.x_hat)
        return replace(self, relative_error=error,
                       exact=exact_recovery(x, self.x_hat, threshold),
                       certificate=certificate)


def exact_recovery(x: SparseSignal, x_hat: T.Tensor,
                   threshold: float) -> bool:
    return relative_error(x.values, x_hat) < threshold
