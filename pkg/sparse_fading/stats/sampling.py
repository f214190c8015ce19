import torch as T

from sparse_fading.utils.tensor_utils import DTYPE


def sample_rayleigh(nu: T.Tensor, shape, generator: T.Generator) -> T.Tensor:
    """
    Rayleigh(nu) draws by inverse CDF, h = nu sqrt(-2 ln u)
    Args:
        nu: per column scales, broadcast against shape
        shape: output shape, last dim indexes nodes
        generator: seeded torch generator
    """
    # 1 - U(0,1] keeps the log finite
    u = 1.0 - T.rand(shape, generator=generator, dtype=DTYPE)
    return nu * T.sqrt(-2.0 * T.log(u))


def sample_activation(gamma: T.Tensor, shape,
                      generator: T.Generator) -> T.Tensor:
    """Bernoulli(gamma_j) transmit indicators as 0/1 floats"""
    return (T.rand(shape, generator=generator, dtype=DTYPE) < gamma).to(DTYPE)


def sample_sparse_gaussian(gamma: T.Tensor, sigma: T.Tensor, shape,
                           generator: T.Generator) -> T.Tensor:
    """Entries a_ij ~ N(0, sigma_j^2), kept with probability gamma_j"""
    a = sigma * T.randn(shape, generator=generator, dtype=DTYPE)
    return a * sample_activation(gamma, shape, generator)


def sample_laplace_product(sigma_a: float, nu_h: float, n: int,
                           generator: T.Generator) -> T.Tensor:
    """n draws of h a with h ~ Rayleigh(nu_h), a ~ N(0, sigma_a^2)"""
    a = sigma_a * T.randn(n, generator=generator, dtype=DTYPE)
    h = sample_rayleigh(T.tensor(nu_h, dtype=DTYPE), (n,), generator)
    return h * a


def sample_mixture(gamma: T.Tensor, sigma_bar: T.Tensor, shape,
                   generator: T.Generator) -> T.Tensor:
    """
    Draws of the effective entries B_ij through the fading construction,
    a Laplace(sigma_bar_j) value with probability gamma_j and 0 otherwise
    Args:
        gamma: per node activation probabilities, length = shape[-1]
        sigma_bar: per node Laplace scales, length = shape[-1]
        shape: output shape
        generator: seeded torch generator
    """
    a = sample_sparse_gaussian(gamma, sigma_bar, shape, generator)
    h = sample_rayleigh(T.ones((), dtype=DTYPE), shape, generator)
    return h * a
