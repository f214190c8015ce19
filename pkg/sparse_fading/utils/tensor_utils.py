import math

import numpy as np
import torch as T

DTYPE = T.float64


def as_tensor(x, dtype=DTYPE) -> T.Tensor:
    """Converts lists, numpy arrays and tensors to a CPU float64 tensor"""
    if isinstance(x, T.Tensor):
        return x.detach().to(device='cpu', dtype=dtype)
    return T.as_tensor(np.asarray(x), dtype=dtype)


def to_numpy(x) -> np.ndarray:
    if isinstance(x, T.Tensor):
        return x.detach().cpu().numpy()
    return np.asarray(x)


def relative_error(x: T.Tensor, x_hat: T.Tensor) -> float:
    """
    Relative l2 error ||x - x_hat|| / ||x||, the MSE metric of the
    experiments. A zero reference falls back to the absolute error.
    """
    reference = T.linalg.vector_norm(x).item()
    error = T.linalg.vector_norm(x - x_hat).item()
    if reference == 0.0:
        return error
    return error / reference


def mean_and_standard_error(values):
    """
    Mean and standard error of the mean, special case if only one element
    Args:
        values: sequence of floats

    Returns: (mean, standard error)

    """
    values = as_tensor(values)
    if values.numel() == 0:
        return math.nan, math.nan
    mean = values.mean().item()
    if values.numel() == 1:
        return mean, 0.0

    return mean, (values.std() / math.sqrt(values.numel())).item()


def binomial_standard_error(p: float, n: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / n) if n > 0 else math.nan
