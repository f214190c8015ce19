import itertools
import math
from dataclasses import dataclass
from typing import List, Tuple

import torch as T

from sparse_fading.errors import EnumerationBudgetError, InfeasibleError
from sparse_fading.solver.interior_point import check_system, least_squares
from sparse_fading.solver.settings import RecoveryResult

RESIDUAL_TOLERANCE = 1e-8


@dataclass(frozen=True, eq=False)
class OracleSolution:
    support: Tuple[int, ...]
    x_hat: T.Tensor
    l1_norm: float
    residual: float


def consistent_supports(B, y, k_max: int, max_n=20, max_k=3,
                        tolerance=RESIDUAL_TOLERANCE) -> List[OracleSolution]:
    """
    Every support of the smallest size s <= k_max whose least squares fit
    leaves an absolute residual ||B x - y|| <= tolerance, ordered by l1
    norm then support
    Args:
        B: (M, N) measurement matrix
        y: length M observation
        k_max: largest support size tried
        max_n: refuse to enumerate above this dimension
        max_k: refuse to enumerate above this support size
        tolerance: absolute residual below which a support fits y

    Returns: list of OracleSolution, empty when no support of size <= k_max
    fits

    """
    B, y = check_system(B, y)
    n = B.shape[1]
    if n > max_n or k_max > max_k:
        raise EnumerationBudgetError(f'support enumeration limited to N <= '
                                     f'{max_n} and k <= {max_k}, got N={n}, '
                                     f'k_max={k_max}')

    for size in range(0, k_max + 1):
        found = []
        for support in itertools.combinations(range(n), size):
            x_hat = T.zeros(n, dtype=B.dtype)
            if size:
                x_hat[list(support)] = least_squares(B[:, list(support)], y)
            residual = T.linalg.vector_norm(B @ x_hat - y).item()
            if residual <= tolerance:
                found.append(OracleSolution(support=support, x_hat=x_hat,
                                            l1_norm=x_hat.abs().sum().item(),
                                            residual=residual))
        if found:
            return sorted(found, key=lambda s: (s.l1_norm, s.support))

    return []


def brute_force_oracle(B, y, k_max: int, max_n=20, max_k=3,
                       tolerance=RESIDUAL_TOLERANCE) -> RecoveryResult:
    """
    Sparsest fit of y within an absolute residual of tolerance, found by
    exhaustive support enumeration
    """
    solutions = consistent_supports(B, y, k_max, max_n=max_n, max_k=max_k,
                                    tolerance=tolerance)
    if not solutions:
        raise InfeasibleError(f'no support of size <= {k_max} explains y')

    best = solutions[0]
    n = best.x_hat.numel()
    enumerated = sum(math.comb(n, s) for s in range(len(best.support) + 1))
    return RecoveryResult(x_hat=best.x_hat, iterations=enumerated,
                          duality_gap=0.0, status='converged',
                          residual=best.residual)


def oracle_is_unique(solutions: List[OracleSolution]) -> bool:
    return len(solutions) == 1
