from dataclasses import dataclass

import torch as T

from sparse_fading.errors import DimensionError, ParameterError
from sparse_fading.utils.tensor_utils import DTYPE, as_tensor


@dataclass(frozen=True, eq=False)
class SparseSignal:
    """
    k-sparse vector observed by the N sensor nodes
    Args:
        values: length N vector, nonzero exactly on the support
        support: sorted indices of the nonzero entries
    """
    values: T.Tensor
    support: T.Tensor

    def __post_init__(self):
        nonzero = T.nonzero(self.values).flatten()
        if not T.equal(nonzero, self.support):
            raise DimensionError('support must list exactly the nonzero '
                                 'entries of values')

    @classmethod
    def from_values(cls, values):
        values = as_tensor(values)
        return cls(values=values, support=T.nonzero(values).flatten())

    @property
    def n(self) -> int:
        return self.values.numel()

    @property
    def k(self) -> int:
        return self.support.numel()

    @property
    def signs(self) -> T.Tensor:
        """sgn(x^S), the sign pattern restricted to the support"""
        return T.sign(self.values[self.support])


def generate_signal(n: int, k: int, lo: float, hi: float,
                    rng: T.Generator) -> SparseSignal:
    """
    Draws a k-sparse signal with support uniform among the k-subsets,
    magnitudes uniform in [lo, hi] and independent uniform signs
    Args:
        n: signal length
        k: sparsity
        lo: smallest magnitude
        hi: largest magnitude
        rng: seeded torch generator

    Returns: SparseSignal

    """
    if k < 0 or k > n:
        raise DimensionError(f'sparsity {k} must lie in [0, {n}]')
    if not 0 < lo < hi:
        raise ParameterError(f'need 0 < lo < hi, got lo={lo}, hi={hi}')

    support = T.randperm(n, generator=rng)[:k].sort().values
    magnitudes = lo + (hi - lo) * T.rand(k, generator=rng, dtype=DTYPE)
    signs = T.where(T.rand(k, generator=rng, dtype=DTYPE) < 0.5, -1.0, 1.0)

    values = T.zeros(n, dtype=DTYPE)
    values[support] = signs.to(DTYPE) * magnitudes

    return SparseSignal(values=values, support=support)
