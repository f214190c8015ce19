import math

import torch as T

from sparse_fading.errors import DimensionError, InfeasibleError, ParameterError
from sparse_fading.solver.settings import RecoveryResult, SolverSettings
from sparse_fading.utils.tensor_utils import as_tensor

DEFAULT_SETTINGS = SolverSettings()


def norm(*parts) -> float:
    return T.linalg.vector_norm(T.cat(parts)).item()


def check_system(B, y):
    B = as_tensor(B)
    y = as_tensor(y)
    if B.dim() != 2 or y.dim() != 1 or B.shape[0] != y.numel():
        raise DimensionError(f'need B of shape (M, N) and y of length M, got '
                             f'{tuple(B.shape)} and {tuple(y.shape)}')
    return B, y


def prune_empty_rows(B: T.Tensor, y: T.Tensor):
    """
    Drops measurements in which no node transmitted
    Returns: (B without empty rows, matching y, y on the empty rows)
    """
    active = (B != 0).any(dim=1)
    return B[active], y[active], y[~active]


def least_squares(B: T.Tensor, y: T.Tensor) -> T.Tensor:
    """Minimum norm least squares solution, the interior point start"""
    return T.linalg.lstsq(B, y.unsqueeze(-1),
                          driver='gelsd').solution.squeeze(-1)


def solve_spd(H: T.Tensor, rhs: T.Tensor, regularization: float) -> T.Tensor:
    """
    Cholesky solve of a symmetric positive definite Newton system, a
    regularization floor relative to the largest diagonal entry is added
    first. Falls back to least squares when the factorization fails.
    """
    floor = regularization * H.diagonal().abs().max().clamp_min(1.0)
    shifted = H + floor * T.eye(H.shape[0], dtype=H.dtype)
    factor, info = T.linalg.cholesky_ex(shifted)
    if info.item() == 0:
        return T.cholesky_solve(rhs.unsqueeze(-1), factor).squeeze(-1)
    return T.linalg.lstsq(shifted, rhs.unsqueeze(-1),
                          driver='gelsd').solution.squeeze(-1)


def ratio_step(values: T.Tensor, directions: T.Tensor) -> float:
    """Largest s <= 1 keeping values + s directions on the same side of 0"""
    moving = values * directions < 0
    if not moving.any():
        return 1.0
    return min(1.0, (-values[moving] / directions[moving]).min().item())


def box_start(x: T.Tensor) -> T.Tensor:
    """u strictly above |x| so that both box constraints are inactive"""
    return 0.95 * x.abs() + 0.10 * x.abs().max()


def zero_result(n: int, residual: float) -> RecoveryResult:
    return RecoveryResult(x_hat=T.zeros(n, dtype=T.float64), iterations=0,
                          duality_gap=0.0, status='converged',
                          residual=residual)


def basis_pursuit(B, y, settings: SolverSettings = DEFAULT_SETTINGS
                  ) -> RecoveryResult:
    """
    min ||x||_1 subject to B x = y
    Args:
        B: (M, N) measurement matrix, M <= N
        y: length M noiseless observation
        settings: solver tolerances and line search parameters

    Returns: RecoveryResult, status 'max_iterations' or 'stalled' carries the
    last iterate

    """
    B, y = check_system(B, y)
    if B.shape[0] > B.shape[1]:
        raise DimensionError(f'basis pursuit needs M <= N, got '
                             f'M={B.shape[0]}, N={B.shape[1]}')
    scale = max(1.0, T.linalg.vector_norm(y).item())
    B_active, y_active, y_empty = prune_empty_rows(B, y)
    if y_empty.numel() and y_empty.abs().max().item() > \
            settings.feasibility_tolerance * scale:
        raise InfeasibleError('nonzero observation on a measurement in '
                              'which no node transmitted')
    if y_active.numel() == 0 or (y_active == 0).all():
        return zero_result(B.shape[1], T.linalg.vector_norm(y).item())

    x0 = least_squares(B_active, y_active)
    start_residual = T.linalg.vector_norm(B_active @ x0 - y_active).item()
    if start_residual > settings.feasibility_tolerance * scale:
        raise InfeasibleError(f'y is outside the range of B, least squares '
                              f'residual {start_residual:.3e}')

    result = l1eq_primal_dual(B_active, y_active, x0, settings)
    x_hat = result.x_hat
    if settings.polish:
        x_hat = polish_on_support(B_active, y_active, result, settings)

    return RecoveryResult(x_hat=x_hat, iterations=result.iterations,
                          duality_gap=result.duality_gap,
                          status=result.status, residual=norm(B @ x_hat - y))


def polish_on_support(A: T.Tensor, b: T.Tensor, result: RecoveryResult,
                      settings: SolverSettings) -> T.Tensor:
    """
    Least squares refit on the support of an interior point solution. Kept
    only if it satisfies A x = b and its l1 norm is within the duality gap
    of the iterate, otherwise the iterate is returned.
    """
    support = result.support()
    if support.numel() == 0 or support.numel() > A.shape[0]:
        return result.x_hat

    refit = T.zeros_like(result.x_hat)
    refit[support] = least_squares(A[:, support], b)
    scale = max(1.0, T.linalg.vector_norm(b).item())
    if norm(A @ refit - b) > settings.feasibility_tolerance * scale:
        return result.x_hat

    l1 = result.x_hat.abs().sum().item()
    if refit.abs().sum().item() > l1 + result.duality_gap + 1e-12 * l1:
        return result.x_hat
    return refit


def l1eq_primal_dual(A: T.Tensor, b: T.Tensor, x0: T.Tensor,
                     settings: SolverSettings) -> RecoveryResult:
    """
    Primal-dual interior point iterations for min sum(u) subject to
    -u <= x <= u, A x = b, started from a feasible x0
    """
    n = x0.numel()
    mu = settings.barrier_mu

    x = x0.clone()
    u = box_start(x)
    fu1, fu2 = x - u, -x - u
    lamu1, lamu2 = -1 / fu1, -1 / fu2
    v = -A @ (lamu1 - lamu2)
    Atv = A.T @ v
    rpri = A @ x - b

    sdg = -(fu1 @ lamu1 + fu2 @ lamu2).item()
    tau = mu * 2 * n / sdg
    rcent = T.cat([-lamu1 * fu1, -lamu2 * fu2]) - 1 / tau
    rdual = T.cat([lamu1 - lamu2 + Atv, 1 - lamu1 - lamu2])
    resnorm = norm(rdual, rcent, rpri)

    iterations = 0
    status = 'converged'
    while sdg >= settings.tolerance:
        if iterations >= settings.max_iterations:
            status = 'max_iterations'
            break

        w1 = -1 / tau * (-1 / fu1 + 1 / fu2) - Atv
        w2 = -1 - 1 / tau * (1 / fu1 + 1 / fu2)
        w3 = -rpri

        sig1 = -lamu1 / fu1 - lamu2 / fu2
        sig2 = lamu1 / fu1 - lamu2 / fu2
        sigx = sig1 - sig2 ** 2 / sig1

        # eliminate dx and du, leaving an (M, M) system in dv
        H11p = (A / sigx) @ A.T
        w1p = w3 - A @ (w1 / sigx - w2 * sig2 / (sigx * sig1))
        dv = solve_spd(H11p, w1p, settings.regularization)
        dx = (w1 - w2 * sig2 / sig1 - A.T @ dv) / sigx
        Adx = A @ dx
        Atdv = A.T @ dv
        du = (w2 - sig2 * dx) / sig1
        dlamu1 = lamu1 / fu1 * (-dx + du) - lamu1 - 1 / (tau * fu1)
        dlamu2 = lamu2 / fu2 * (dx + du) - lamu2 - 1 / (tau * fu2)

        s = min(ratio_step(lamu1, dlamu1), ratio_step(lamu2, dlamu2),
                ratio_step(fu1, dx - du), ratio_step(fu2, -dx - du))
        s *= 0.99

        for _ in range(settings.max_backtracks):
            xp, up = x + s * dx, u + s * du
            vp, Atvp = v + s * dv, Atv + s * Atdv
            lamu1p, lamu2p = lamu1 + s * dlamu1, lamu2 + s * dlamu2
            fu1p, fu2p = xp - up, -xp - up
            rdp = T.cat([lamu1p - lamu2p + Atvp, 1 - lamu1p - lamu2p])
            rcp = T.cat([-lamu1p * fu1p, -lamu2p * fu2p]) - 1 / tau
            rpp = rpri + s * Adx
            if norm(rdp, rcp, rpp) <= (1 - settings.backtrack_alpha * s) * \
                    resnorm:
                break
            s *= settings.backtrack_beta
        else:
            status = 'stalled'
            break

        x, u, v, Atv = xp, up, vp, Atvp
        lamu1, lamu2, fu1, fu2 = lamu1p, lamu2p, fu1p, fu2p
        iterations += 1

        sdg = -(fu1 @ lamu1 + fu2 @ lamu2).item()
        tau = mu * 2 * n / sdg
        rpri = rpp
        rcent = T.cat([-lamu1 * fu1, -lamu2 * fu2]) - 1 / tau
        rdual = rdp
        resnorm = norm(rdual, rcent, rpri)

    return RecoveryResult(x_hat=x, iterations=iterations, duality_gap=sdg,
                          status=status, residual=norm(A @ x - b))


def bpdn(B, y, eps_v: float, settings: SolverSettings = DEFAULT_SETTINGS
         ) -> RecoveryResult:
    """
    min ||x||_1 subject to ||y - B x||_2 <= eps_v
    Args:
        B: (M, N) measurement matrix
        y: length M noisy observation
        eps_v: radius of the noise ball, 0 falls back to basis pursuit
        settings: solver tolerances and line search parameters

    Returns: RecoveryResult, duality_gap is the barrier gap (2N + 1) / tau

    """
    B, y = check_system(B, y)
    if eps_v < 0:
        raise ParameterError(f'eps_v must be nonnegative, got {eps_v}')
    if eps_v == 0:
        return basis_pursuit(B, y, settings)

    B_active, y_active, y_empty = prune_empty_rows(B, y)
    # empty rows spend part of the noise budget on a residual nothing can
    # reduce
    eps2 = eps_v ** 2 - (y_empty @ y_empty).item()
    if (y_active @ y_active).item() <= eps2:
        return zero_result(B.shape[1], T.linalg.vector_norm(y).item())
    if eps2 <= 0:
        raise InfeasibleError('observations on empty measurements already '
                              'exceed the noise radius')
    eps = math.sqrt(eps2)

    x0 = least_squares(B_active, y_active)
    start_residual = T.linalg.vector_norm(B_active @ x0 - y_active).item()
    if start_residual >= eps:
        raise InfeasibleError(f'smallest achievable residual '
                              f'{start_residual:.3e} is not below eps_v')

    result = l1qc_log_barrier(B_active, y_active, eps, x0, settings)
    return RecoveryResult(x_hat=result.x_hat, iterations=result.iterations,
                          duality_gap=result.duality_gap,
                          status=result.status,
                          residual=norm(B @ result.x_hat - y))


def l1qc_log_barrier(A: T.Tensor, b: T.Tensor, eps: float, x0: T.Tensor,
                     settings: SolverSettings) -> RecoveryResult:
    """
    Log-barrier method for min sum(u) subject to -u <= x <= u,
    ||A x - b||_2 <= eps, started from a strictly feasible x0
    """
    n = x0.numel()
    mu = settings.barrier_mu
    x = x0.clone()
    u = box_start(x)

    tau = max((2 * n + 1) / x.abs().sum().item(), 1.0)
    # the last stage runs at a weight tau >= (2n + 1) / barrier_tolerance
    stages = math.ceil((math.log(2 * n + 1) -
                        math.log(settings.barrier_tolerance) -
                        math.log(tau)) / math.log(mu))
    stages = max(stages, 0) + 1

    AtA = A.T @ A
    iterations = 0
    status = 'converged'
    for _ in range(stages):
        x, u, steps, status = l1qc_newton(A, AtA, b, eps, x, u, tau,
                                          settings)
        iterations += steps
        tau *= mu

    gap = (2 * n + 1) / (tau / mu)
    return RecoveryResult(x_hat=x, iterations=iterations, duality_gap=gap,
                          status=status, residual=norm(A @ x - b))


def barrier_objective(u, fu1, fu2, fe, tau) -> float:
    if (fu1 >= 0).any() or (fu2 >= 0).any() or fe >= 0:
        return math.inf
    return (u.sum() - (T.log(-fu1).sum() + T.log(-fu2).sum() +
                       math.log(-fe)) / tau).item()


def l1qc_newton(A, AtA, b, eps, x, u, tau, settings: SolverSettings):
    """
    Newton iterations on the barrier problem at a fixed weight tau
    Returns: (x, u, steps taken, status)
    """
    r = A @ x - b
    fu1, fu2 = x - u, -x - u
    fe = 0.5 * ((r @ r).item() - eps ** 2)
    f = barrier_objective(u, fu1, fu2, fe, tau)

    for step in range(settings.newton_max_iterations):
        atr = A.T @ r
        ntgz = 1 / fu1 - 1 / fu2 + atr / fe
        ntgu = -tau - 1 / fu1 - 1 / fu2
        gradf = -T.cat([ntgz, ntgu]) / tau

        sig11 = 1 / fu1 ** 2 + 1 / fu2 ** 2
        sig12 = -1 / fu1 ** 2 + 1 / fu2 ** 2
        sigx = sig11 - sig12 ** 2 / sig11

        w1p = ntgz - sig12 / sig11 * ntgu
        H11p = T.diag(sigx) - AtA / fe + T.outer(atr, atr) / fe ** 2
        dx = solve_spd(H11p, w1p, settings.regularization)
        Adx = A @ dx
        du = ntgu / sig11 - sig12 / sig11 * dx

        # largest step that stays inside the box and the noise ball
        aqe = (Adx @ Adx).item()
        bqe = 2 * (r @ Adx).item()
        cqe = (r @ r).item() - eps ** 2
        ball = (-bqe + math.sqrt(bqe ** 2 - 4 * aqe * cqe)) / (2 * aqe) \
            if aqe > 0 else math.inf
        s = 0.99 * min(ratio_step(fu1, dx - du), ratio_step(fu2, -dx - du),
                       ball)

        slope = (gradf @ T.cat([dx, du])).item()
        for _ in range(settings.max_backtracks):
            xp, up, rp = x + s * dx, u + s * du, r + s * Adx
            fu1p, fu2p = xp - up, -xp - up
            fep = 0.5 * ((rp @ rp).item() - eps ** 2)
            fp = barrier_objective(up, fu1p, fu2p, fep, tau)
            if fp <= f + settings.backtrack_alpha * s * slope:
                break
            s *= settings.backtrack_beta
        else:
            return x, u, step, 'stalled'

        x, u, r, fu1, fu2, fe, f = xp, up, rp, fu1p, fu2p, fep, fp
        if -slope / 2 < settings.barrier_tolerance:
            return x, u, step + 1, 'converged'

    return x, u, settings.newton_max_iterations, 'max_iterations'
