import math
from dataclasses import dataclass

import torch as T

from sparse_fading.errors import DimensionError, ParameterError
from sparse_fading.utils.tensor_utils import as_tensor


@dataclass(frozen=True)
class SingularValueEnvelope:
    s_min: float
    s_max: float
    s_min_pred: float
    s_max_pred: float
    holds: bool


def second_moment_norm(second_moment) -> float:
    """Spectral norm of Sigma, a scalar stands for a multiple of I"""
    second_moment = as_tensor(second_moment)
    if second_moment.dim() == 0:
        return abs(second_moment.item())
    if second_moment.dim() != 2 or \
            second_moment.shape[0] != second_moment.shape[1]:
        raise DimensionError('second moment must be a square matrix')
    return T.linalg.matrix_norm(second_moment, ord=2).item()


def singular_value_envelope(matrix, second_moment, T0: float,
                            t: float) -> SingularValueEnvelope:
    """
    Checks ||Sigma||^(1/2) sqrt(M) -/+ t sqrt(T0) around the extreme singular
    values of a matrix with independent rows of second moment Sigma
    Args:
        matrix: (M, k) realization
        second_moment: (k, k) row second moment matrix or a scalar multiple
            of the identity
        T0: bound on the squared row norms
        t: deviation parameter, t >= 0

    Returns: SingularValueEnvelope, holds is False when a singular value
    leaves the envelope

    """
    matrix = as_tensor(matrix)
    if matrix.dim() != 2:
        raise DimensionError('matrix must be two dimensional')
    if T0 <= 0 or t < 0:
        raise ParameterError(f'need T0 > 0 and t >= 0, got T0={T0}, t={t}')

    center = math.sqrt(second_moment_norm(second_moment)) * math.sqrt(
        matrix.shape[0])
    width = t * math.sqrt(T0)
    singular_values = T.linalg.svdvals(matrix)
    s_min = singular_values.min().item()
    s_max = singular_values.max().item()

    return SingularValueEnvelope(
        s_min=s_min, s_max=s_max, s_min_pred=center - width,
        s_max_pred=center + width,
        holds=center - width <= s_min and s_max <= center + width)
