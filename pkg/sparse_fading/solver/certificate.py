from dataclasses import dataclass

import torch as T

from sparse_fading.errors import DimensionError, RankDeficiencyError
from sparse_fading.model.signal import SparseSignal
from sparse_fading.utils.tensor_utils import as_tensor

RANK_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class Certificate:
    holds: bool
    max_correlation: float
    b_S: T.Tensor

    @property
    def peak_to_total(self) -> float:
        """||b_S||_inf / ||b_S||_2, the realized R"""
        norm = T.linalg.vector_norm(self.b_S).item()
        if norm == 0.0:
            return 0.0
        return self.b_S.abs().max().item() / norm


def certificate_vector(B, support, signs) -> T.Tensor:
    """
    b_S = (B_S^+)^T sgn(x^S), computed through a reduced QR of B_S
    Args:
        B: (M, N) effective measurement matrix
        support: indices S of the nonzero entries
        signs: sign pattern on the support

    Returns: length M vector b_S

    """
    B = as_tensor(B)
    support = T.as_tensor(support, dtype=T.int64)
    signs = as_tensor(signs)
    if support.numel() != signs.numel():
        raise DimensionError(f'{support.numel()} support indices but '
                             f'{signs.numel()} signs')
    if support.numel() == 0:
        return T.zeros(B.shape[0], dtype=B.dtype)
    if support.numel() > B.shape[0]:
        raise RankDeficiencyError(f'B_S has {support.numel()} columns but '
                                  f'only {B.shape[0]} rows')

    B_S = B[:, support]
    q, r = T.linalg.qr(B_S, mode='reduced')
    scale = T.linalg.matrix_norm(B_S, ord=2).item()
    if r.diagonal().abs().min().item() <= RANK_TOLERANCE * scale:
        raise RankDeficiencyError('B_S is rank deficient, the certificate '
                                  'is undefined')

    # B_S^+ = R^-1 Q^T, so (B_S^+)^T s = Q R^-T s
    z = T.linalg.solve_triangular(r.T, signs.unsqueeze(-1), upper=False)
    return (q @ z).squeeze(-1)


def recovery_certificate(B, x: SparseSignal) -> Certificate:
    """
    Sufficient condition for x to be the unique l1 minimizer consistent with
    B x: |<b_l, b_S>| < 1 for every column b_l off the support
    Args:
        B: (M, N) effective measurement matrix
        x: the sparse signal

    Returns: Certificate with the flag, the largest off-support correlation
    and b_S

    """
    B = as_tensor(B)
    if B.shape[1] != x.n:
        raise DimensionError(f'B has {B.shape[1]} columns, x has length '
                             f'{x.n}')
    b_S = certificate_vector(B, x.support, x.signs)

    off_support = T.ones(x.n, dtype=T.bool)
    off_support[x.support] = False
    if not off_support.any():
        return Certificate(holds=True, max_correlation=0.0, b_S=b_S)

    correlation = (B[:, off_support].T @ b_S).abs().max().item()
    return Certificate(holds=correlation < 1.0, max_correlation=correlation,
                       b_S=b_S)
