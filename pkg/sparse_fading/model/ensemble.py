import math
import os
from dataclasses import dataclass

import numpy as np
import torch as T

from sparse_fading.errors import DimensionError, InputError
from sparse_fading.model.network import NetworkConfig
from sparse_fading.model.signal import SparseSignal
from sparse_fading.stats.sampling import (sample_rayleigh,
                                          sample_sparse_gaussian)
from sparse_fading.utils.tensor_utils import DTYPE, to_numpy


@dataclass(frozen=True, eq=False)
class MeasurementEnsemble:
    """
    One realization of the MAC observation y = (H * A) x + v
    Args:
        A: M x N sparse Gaussian projection matrix
        H: M x N Rayleigh fading magnitudes
        B: effective matrix, Hadamard product H * A
        y: received vector, length M
        v: receiver noise, length M
        seed: seed of the generator that produced the draw
    """
    A: T.Tensor
    H: T.Tensor
    B: T.Tensor
    y: T.Tensor
    v: T.Tensor
    seed: int

    @property
    def M(self) -> int:
        return self.B.shape[0]

    @property
    def N(self) -> int:
        return self.B.shape[1]

    def nonzero_fraction(self) -> float:
        return (self.A != 0).to(DTYPE).mean().item()


def check_dimensions(x: SparseSignal, cfg: NetworkConfig):
    if x.n != cfg.N:
        raise DimensionError(f'signal length {x.n} does not match N={cfg.N}')


def observe(A: T.Tensor, H: T.Tensor, x: SparseSignal, cfg: NetworkConfig,
            rng: T.Generator) -> MeasurementEnsemble:
    B = H * A
    v = math.sqrt(cfg.sigma_v2) * T.randn(cfg.M, generator=rng, dtype=DTYPE)
    y = B @ x.values + v

    return MeasurementEnsemble(A=A, H=H, B=B, y=y, v=v,
                               seed=rng.initial_seed())


def generate_ensemble(x: SparseSignal, cfg: NetworkConfig,
                      rng: T.Generator) -> MeasurementEnsemble:
    """
    Draws A, H and the noise for one block of M MAC transmissions
    Args:
        x: signal held by the nodes
        cfg: network parameters
        rng: seeded torch generator, consumed in the order A, H, v

    Returns: MeasurementEnsemble with B = H * A and y = B x + v

    """
    check_dimensions(x, cfg)
    shape = (cfg.M, cfg.N)
    A = sample_sparse_gaussian(cfg.gamma, cfg.sigma, shape, rng)
    H = sample_rayleigh(cfg.nu, shape, rng)

    return observe(A, H, x, cfg, rng)


def awgn_ensemble(x: SparseSignal, cfg: NetworkConfig,
                  rng: T.Generator) -> MeasurementEnsemble:
    """Same draw of A as generate_ensemble for a given seed, without
    fading: H is all ones and B = A"""
    check_dimensions(x, cfg)
    shape = (cfg.M, cfg.N)
    A = sample_sparse_gaussian(cfg.gamma, cfg.sigma, shape, rng)
    H = T.ones(shape, dtype=DTYPE)

    return observe(A, H, x, cfg, rng)


def noise_radius(sigma_v: float, M: int) -> float:
    """eps_v = sigma_v sqrt(M) sqrt(1 + 2 sqrt(2) / sqrt(M)), the l2 ball
    radius of the noisy program"""
    return sigma_v * math.sqrt(M) * math.sqrt(1.0 + 2.0 * math.sqrt(2.0)
                                              / math.sqrt(M))


ENSEMBLE_FIELDS = ('A', 'H', 'B', 'y', 'v')


def save_ensemble(ensemble: MeasurementEnsemble, path: str):
    """
    Dumps an ensemble for debugging: ensemble.pt for reloading plus one CSV
    per matrix / vector
    Args:
        ensemble: ensemble to write
        path: output directory, created if missing
    """
    os.makedirs(path, exist_ok=True)
    payload = {name: getattr(ensemble, name) for name in ENSEMBLE_FIELDS}
    payload['seed'] = ensemble.seed
    T.save(payload, os.path.join(path, 'ensemble.pt'))

    for name in ENSEMBLE_FIELDS:
        np.savetxt(os.path.join(path, f'{name}.csv'),
                   to_numpy(getattr(ensemble, name)), delimiter=',',
                   fmt='%.17g')


def load_ensemble(path: str) -> MeasurementEnsemble:
    """
    Reads an ensemble written by save_ensemble. Without ensemble.pt the CSV
    dump is read instead: B.csv and y.csv are required, A.csv, H.csv and
    v.csv default to B, all ones and zeros when absent
    """
    archive = os.path.join(path, 'ensemble.pt')
    if os.path.exists(archive):
        return MeasurementEnsemble(**T.load(archive))

    csv = {name: os.path.join(path, f'{name}.csv') for name in ENSEMBLE_FIELDS}
    if not (os.path.exists(csv['B']) and os.path.exists(csv['y'])):
        raise InputError(f'neither ensemble.pt nor B.csv and y.csv under '
                         f'{path}')

    def read(name, ndmin):
        return T.as_tensor(np.loadtxt(csv[name], delimiter=',',
                                      ndmin=ndmin), dtype=DTYPE)

    B = read('B', 2)
    y = read('y', 1)
    if y.numel() != B.shape[0]:
        raise DimensionError(f'y has {y.numel()} entries, B has '
                             f'{B.shape[0]} rows')
    A = read('A', 2) if os.path.exists(csv['A']) else B.clone()
    H = read('H', 2) if os.path.exists(csv['H']) else T.ones_like(B)
    v = read('v', 1) if os.path.exists(csv['v']) else T.zeros_like(y)
    return MeasurementEnsemble(A=A, H=H, B=B, y=y, v=v, seed=-1)
