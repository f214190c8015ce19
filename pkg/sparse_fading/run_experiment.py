import os
import sys
import warnings

import numpy as np
import pandas as pd

from sparse_fading.bounds.measurement import (BoundInputs, corollary_iid_bound,
                                              theorem1_bounds)
from sparse_fading.design.energy import energy_report
from sparse_fading.design.transmission import (DesignProblem, optimal_gamma,
                                               psi, psi_optimal)
from sparse_fading.errors import (EnumerationBudgetError, InfeasibleError,
                                  SparseFadingError)
from sparse_fading.harness.experiments import (EXPECTED_ORDERINGS,
                                               ExperimentSpec)
from sparse_fading.harness.output import (make_parent, noise_trend,
                                          ordering_checks, summarize_curve)
from sparse_fading.harness.runner import run_experiment
from sparse_fading.harness.validation import groups_for, validate_statistics
from sparse_fading.model.ensemble import (generate_ensemble, load_ensemble,
                                          noise_radius, save_ensemble)
from sparse_fading.model.network import NetworkConfig
from sparse_fading.model.signal import SparseSignal, generate_signal
from sparse_fading.solver.certificate import recovery_certificate
from sparse_fading.solver.interior_point import basis_pursuit, bpdn
from sparse_fading.solver.oracle import brute_force_oracle
from sparse_fading.solver.settings import SolverSettings
from sparse_fading.utils.config import load_config
from sparse_fading.utils.logger import (CommandLog, log_bounds,
                                         log_validation,
                                         warn_about_failed_checks)
from sparse_fading.utils.parser import config_overrides, parse_args
from sparse_fading.utils.seeding import derive_seed, make_generator, \
    seed_everything
from sparse_fading.utils.tensor_utils import to_numpy

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_CAP_EXCEEDED = 3


def draw_instance(config):
    seed = config['seed']
    x = generate_signal(config['N'], config['k'], config['signal_low'],
                        config['signal_high'],
                        make_generator(derive_seed(seed, 'signal')))
    cfg = NetworkConfig.from_config(config)
    ensemble = generate_ensemble(x, cfg,
                                 make_generator(derive_seed(seed, 'ensemble')))
    return x, cfg, ensemble


def run_gen(config, args):
    x, _, ensemble = draw_instance(config)
    out = config['out'] or 'ensemble'
    save_ensemble(ensemble, out)
    np.savetxt(os.path.join(out, 'x.csv'), to_numpy(x.values),
               delimiter=',', fmt='%.17g')
    print(f'wrote M={ensemble.M} N={ensemble.N} ensemble to {out}')
    return EXIT_OK


def run_recover(config, args):
    settings = SolverSettings.from_config(config)
    if args.input is not None:
        ensemble = load_ensemble(args.input)
        x_path = os.path.join(args.input, 'x.csv')
        x = SparseSignal.from_values(np.loadtxt(x_path, delimiter=',')) \
            if os.path.exists(x_path) else None
        sigma_v2 = config['sigma_v2']
    else:
        x, cfg, ensemble = draw_instance(config)
        sigma_v2 = cfg.sigma_v2

    if args.oracle:
        result = brute_force_oracle(ensemble.B, ensemble.y,
                                    config['oracle_k_max'],
                                    max_n=config['oracle_max_n'])
    elif sigma_v2 > 0:
        eps_v = noise_radius(sigma_v2 ** 0.5, ensemble.M)
        result = bpdn(ensemble.B, ensemble.y, eps_v, settings)
    else:
        result = basis_pursuit(ensemble.B, ensemble.y, settings)

    row = {'status': result.status, 'iterations': result.iterations,
           'duality_gap': result.duality_gap, 'residual': result.residual,
           'support_size': int(result.support().numel())}
    if x is not None:
        certificate = recovery_certificate(ensemble.B, x) \
            if x.k <= ensemble.M else None
        scored = result.score(x, settings.exact_threshold, certificate)
        row.update({'relative_error': scored.relative_error,
                    'exact': scored.exact,
                    'certificate_holds': None if certificate is None
                    else certificate.holds,
                    'max_correlation': None if certificate is None
                    else certificate.max_correlation})

    write_frame(pd.DataFrame([row]), config['out'] or 'recovery.csv')
    return EXIT_OK if result.converged else EXIT_CAP_EXCEEDED


def run_sweep(config, args):
    spec = ExperimentSpec.from_config(config)
    if spec.is_validation:
        return run_validate(config, args)

    settings = SolverSettings.from_config(config)
    frame = run_experiment(spec, settings,
                           num_workers=config['num_workers'],
                           resume=config['resume'],
                           use_wandb=config['use_wandb'],
                           prefix=config['prefix'], config=config)
    print(f'wrote {len(frame)} points to {spec.out}')
    if not spec.is_phase:
        print(summarize_curve(frame).to_string(index=False))
        report_orderings(frame, spec)
    return EXIT_OK


def report_orderings(frame, spec):
    pairs = EXPECTED_ORDERINGS.get(spec.experiment, ())
    checks = ordering_checks(frame, pairs)
    if len(checks):
        print(checks.to_string(index=False))
        if not checks['ordered'].all():
            warnings.warn(f'{int((~checks["ordered"]).sum())} curve orderings '
                          f'reversed at the largest M')
    if len(spec.sigma_v2_grid) > 1:
        print(noise_trend(frame).to_string(index=False))


def run_bounds(config, args):
    cfg = NetworkConfig.from_config(config)
    inputs = BoundInputs.from_config(config, cfg.extremes())
    report = theorem1_bounds(inputs)
    log = CommandLog(config, config['use_wandb'], config['prefix'])
    log_bounds(log, report)
    log.flush()
    row = {'k': inputs.k, 'N': inputs.N, 'M1': report.M1, 'M2': report.M2,
           'M_required': report.M_required, 'm1_dominates': report.dominant,
           'C1': report.C1, 'C2': report.C2, 'psi': report.psi,
           'R': report.R, 'notes': report.scaling_notes}
    if cfg.is_identical():
        row['corollary_M'] = corollary_iid_bound(
            inputs.k, inputs.N, cfg.mean_gamma, inputs.epsilon,
            C0=config['C0'])

    write_frame(pd.DataFrame([row]), config['out'] or 'bounds.csv')
    return EXIT_OK


def run_design(config, args):
    nu = None
    if args.nu_file is not None:
        nu = np.loadtxt(args.nu_file, delimiter=',').flatten()
    elif args.nu is not None:
        nu = [float(value) for value in args.nu.split(',')]
    problem = DesignProblem.from_config(config, nu=nu)

    gamma = optimal_gamma(problem)
    frame = pd.DataFrame({'node': range(problem.nu.numel()),
                          'nu': to_numpy(problem.nu),
                          'gamma': to_numpy(gamma)})
    write_frame(frame, config['out'] or 'design.csv')

    print(f'gamma_bar = {problem.gamma_bar:.6g}')
    print(f'psi(optimal) = {psi(gamma, problem.nu):.6g}, closed form '
          f'{psi_optimal(problem.nu, problem.gamma_bar):.6g}')
    uniform = gamma.new_full(gamma.shape, problem.gamma_bar)
    print(f'psi(uniform gamma_bar) = {psi(uniform, problem.nu):.6g}')
    if problem.E_total is not None:
        energy = energy_report(problem.E_total, problem.sigma_a2, config['k'],
                               problem.nu.numel(), problem.epsilon,
                               C0=config['C0'])
        print(f'budget gamma* = {energy.gamma_star:.6g}, M = {energy.M:.6g}, '
              f'E_required = {energy.E_required:.6g}, feasible = '
              f'{energy.feasible}')
    return EXIT_OK


def run_validate(config, args):
    checks = validate_statistics(config, groups_for(config['experiment']))
    write_frame(checks, config['out'] or 'validation.csv')
    warn_about_failed_checks(checks)
    log = CommandLog(config, config['use_wandb'], config['prefix'])
    log_validation(log, checks)
    log.flush()
    print(f'{int(checks["passed"].sum())} of {len(checks)} checks passed')
    return EXIT_OK


def write_frame(frame: pd.DataFrame, path: str):
    make_parent(path)
    frame.to_csv(path, index=False, float_format='%.10g')
    print(f'wrote {path}')


COMMANDS = {'gen': run_gen, 'recover': run_recover, 'sweep': run_sweep,
            'bounds': run_bounds, 'design': run_design,
            'validate': run_validate}


def main(argv=None):
    args = sys.argv[1:] if argv is None else argv
    args = parse_args(args)

    try:
        config = load_config(args.config, config_overrides(args))
        seed_everything(config['seed'], deterministic=True)
        return COMMANDS[args.command](config, args)
    except InfeasibleError as error:
        print(f'infeasible: {error}', file=sys.stderr)
        return EXIT_INFEASIBLE
    except EnumerationBudgetError as error:
        print(f'enumeration budget exceeded: {error}', file=sys.stderr)
        return EXIT_CAP_EXCEEDED
    except SparseFadingError as error:
        print(f'error: {error}', file=sys.stderr)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
