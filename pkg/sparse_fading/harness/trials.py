import math
import warnings
from dataclasses import dataclass

import torch as T

from sparse_fading.design.transmission import DesignProblem, optimal_gamma
from sparse_fading.errors import InfeasibleError, RankDeficiencyError
from sparse_fading.harness.experiments import (CurvePoint, ExperimentSpec,
                                               GridPoint, PhaseCell)
from sparse_fading.model.ensemble import (awgn_ensemble, generate_ensemble,
                                          noise_radius)
from sparse_fading.model.network import (NetworkConfig, nonidentical_nu,
                                         random_gamma)
from sparse_fading.model.signal import generate_signal
from sparse_fading.solver.certificate import recovery_certificate
from sparse_fading.solver.interior_point import basis_pursuit, bpdn
from sparse_fading.solver.settings import SolverSettings, exact_recovery
from sparse_fading.utils.seeding import derive_seed, make_generator
from sparse_fading.utils.tensor_utils import (binomial_standard_error,
                                              mean_and_standard_error,
                                              relative_error)


@dataclass(frozen=True)
class TrialOutcome:
    error: float
    exact: bool
    converged: bool = True
    infeasible: bool = False


def trial_generator(spec: ExperimentSpec, point: GridPoint, trial: int,
                    stream: str) -> T.Generator:
    """
    Generator of one random stream of one trial. The curve is left out of
    the seed so every curve of a figure sees the same signals and draws.
    """
    return make_generator(derive_seed(spec.seed, stream, point.k, point.M,
                                      point.gamma, point.sigma_v2, trial))


def trial_network(spec: ExperimentSpec, point: GridPoint,
                  rng: T.Generator) -> NetworkConfig:
    """
    Channel scales and transmission probabilities of one trial
    Args:
        spec: experiment being run
        point: grid point, its curve selects the gamma policy
        rng: generator of the trial's channel stream

    Returns: NetworkConfig with M = point.M and sigma_v2 = point.sigma_v2

    """
    curve = point.curve
    if curve.identical_channels:
        nu = T.full((spec.N,), curve.nu_min, dtype=T.float64)
    else:
        nu = nonidentical_nu(spec.N, curve.nu_min, curve.nu_max, rng,
                             sort=True)

    if curve.policy == 'optimal':
        problem = DesignProblem(nu=nu, sigma_a2=spec.sigma_a2,
                                E_per_node=point.gamma * spec.sigma_a2)
        gamma = optimal_gamma(problem)
    elif curve.policy == 'random':
        gamma = random_gamma(spec.N, rng, low=spec.gamma_low)
    else:
        gamma = point.gamma

    return NetworkConfig.build(N=spec.N, M=point.M, gamma=gamma,
                               sigma=math.sqrt(spec.sigma_a2), nu=nu,
                               sigma_v2=point.sigma_v2)


def draw_problem(spec: ExperimentSpec, point: GridPoint, trial: int):
    x = generate_signal(spec.N, point.k, spec.signal_low, spec.signal_high,
                        trial_generator(spec, point, trial, 'signal'))
    cfg = trial_network(spec, point,
                        trial_generator(spec, point, trial, 'channel'))
    draw = awgn_ensemble if point.curve.channel == 'awgn' else \
        generate_ensemble
    ensemble = draw(x, cfg, trial_generator(spec, point, trial, 'ensemble'))

    return x, ensemble


def run_trial(spec: ExperimentSpec, point: GridPoint, trial: int,
              settings: SolverSettings) -> TrialOutcome:
    """
    Draws the signal, the network and the ensemble of one trial and solves
    it, basis pursuit without noise and BPDN otherwise
    Args:
        spec: experiment being run
        point: grid point of the trial
        trial: trial index within the point
        settings: solver settings

    Returns: TrialOutcome of the recovered signal

    """
    x, ensemble = draw_problem(spec, point, trial)

    try:
        if point.sigma_v2 == 0.0:
            result = basis_pursuit(ensemble.B, ensemble.y, settings)
        else:
            eps_v = noise_radius(math.sqrt(point.sigma_v2), point.M)
            result = bpdn(ensemble.B, ensemble.y, eps_v, settings)
    except InfeasibleError:
        error = relative_error(x.values, T.zeros_like(x.values))
        return TrialOutcome(error=error, exact=False, converged=False,
                            infeasible=True)

    return TrialOutcome(
        error=relative_error(x.values, result.x_hat),
        exact=exact_recovery(x, result.x_hat, settings.exact_threshold),
        converged=result.converged)


def run_point(spec: ExperimentSpec, point: GridPoint,
              settings: SolverSettings) -> CurvePoint:
    """
    Runs every trial of one grid point
    Args:
        spec: experiment being run
        point: grid point
        settings: solver settings

    Returns: CurvePoint with the averaged relative error and exact rate

    """
    errors = []
    exact = 0
    nonconverged = 0
    infeasible = 0

    for trial in range(spec.trials):
        outcome = run_trial(spec, point, trial, settings)
        errors.append(outcome.error)
        exact += outcome.exact
        nonconverged += not outcome.converged and not outcome.infeasible
        infeasible += outcome.infeasible

    if nonconverged or infeasible:
        warnings.warn(f'{point.curve.label} M={point.M} gamma={point.gamma} '
                      f'sigma_v2={point.sigma_v2}: {nonconverged} solves did '
                      f'not converge, {infeasible} were infeasible')

    mean, standard_error = mean_and_standard_error(errors)
    rate = exact / spec.trials
    return CurvePoint(**point_coordinates(spec, point), trials=spec.trials,
                      mean_error=mean, standard_error=standard_error,
                      exact_rate=rate,
                      exact_standard_error=binomial_standard_error(
                          rate, spec.trials),
                      nonconverged=nonconverged, infeasible=infeasible)


def run_phase_cell(spec: ExperimentSpec, point: GridPoint,
                   settings: SolverSettings) -> PhaseCell:
    """
    Certificate and exact recovery rates of one (k, M) cell. A rank
    deficient B_S counts as a certificate that does not hold and an
    infeasible solve as x_hat = 0. Trials where the certificate holds and
    basis pursuit still misses x are counted in certified_not_recovered.
    """
    certified = 0
    recovered = 0
    certified_not_recovered = 0
    rank_deficient = 0
    infeasible = 0

    for trial in range(spec.trials):
        x, ensemble = draw_problem(spec, point, trial)
        try:
            holds = recovery_certificate(ensemble.B, x).holds
        except RankDeficiencyError:
            holds = False
            rank_deficient += 1

        try:
            result = basis_pursuit(ensemble.B, ensemble.y, settings)
            exact = exact_recovery(x, result.x_hat, settings.exact_threshold)
        except InfeasibleError:
            exact = False
            infeasible += 1

        certified += holds
        recovered += exact
        certified_not_recovered += holds and not exact

    if rank_deficient or infeasible:
        warnings.warn(f'k={point.k} M={point.M}: B_S rank deficient in '
                      f'{rank_deficient} and basis pursuit infeasible in '
                      f'{infeasible} of {spec.trials} trials')
    if certified_not_recovered:
        warnings.warn(f'k={point.k} M={point.M}: certificate held without '
                      f'exact recovery in {certified_not_recovered} trials')

    certificate_rate = certified / spec.trials
    recovery_rate = recovered / spec.trials
    return PhaseCell(**point_coordinates(spec, point), trials=spec.trials,
                     certificate_rate=certificate_rate,
                     certificate_standard_error=binomial_standard_error(
                         certificate_rate, spec.trials),
                     recovery_rate=recovery_rate,
                     recovery_standard_error=binomial_standard_error(
                         recovery_rate, spec.trials),
                     certified_not_recovered=certified_not_recovered,
                     rank_deficient=rank_deficient, infeasible=infeasible)


def evaluate_point(spec: ExperimentSpec, point: GridPoint,
                   settings: SolverSettings):
    if spec.is_phase:
        return run_phase_cell(spec, point, settings)
    return run_point(spec, point, settings)


def point_coordinates(spec: ExperimentSpec, point: GridPoint) -> dict:
    curve = point.curve
    return {'experiment': spec.experiment, 'curve': curve.label,
            'channel': curve.channel, 'policy': curve.policy,
            'nu_min': curve.nu_min, 'nu_max': curve.nu_max, 'k': point.k,
            'M': point.M, 'gamma': point.gamma, 'sigma_v2': point.sigma_v2}
