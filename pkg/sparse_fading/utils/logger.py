import warnings

import wandb


def init_logging(config, runner, prefix):
    if runner.use_wandb:
        # initialize logging
        wandb.init(project="SparseFading", config=config)
        wandb.run.name = prefix + '_' + wandb.run.name


def log_curve_point(runner, point):
    if runner.use_wandb:
        runner.metrics.update({'curve': point.curve,
                               'M': point.M,
                               'gamma': point.gamma,
                               'sigma_v2': point.sigma_v2,
                               'mean error': point.mean_error,
                               'standard error': point.standard_error,
                               'exact rate': point.exact_rate,
                               'nonconverged': point.nonconverged})


def log_phase_cell(runner, cell):
    if runner.use_wandb:
        runner.metrics.update({'k': cell.k,
                               'M': cell.M,
                               'certificate rate': cell.certificate_rate,
                               'recovery rate': cell.recovery_rate,
                               'certified not recovered':
                                   cell.certified_not_recovered,
                               'rank deficient': cell.rank_deficient})


def log_grid_point(runner, row):
    if hasattr(row, 'certificate_rate'):
        log_phase_cell(runner, row)
    else:
        log_curve_point(runner, row)


def log_progress(runner, done, total):
    if runner.use_wandb:
        runner.metrics.update({'points done': done,
                               'fraction done': done / total})


def log_validation(runner, checks):
    if runner.use_wandb:
        runner.metrics.update({
            'checks passed': int(checks['passed'].sum()),
            'checks failed': int((~checks['passed']).sum())})


def log_bounds(runner, report):
    if runner.use_wandb:
        runner.metrics.update({'M1': report.M1,
                               'M2': report.M2,
                               'M required': report.M_required,
                               'R': report.R,
                               'psi': report.psi})


def warn_about_failed_checks(checks):
    failed = checks.loc[~checks['passed'], 'check'].tolist()
    if failed:
        warnings.warn(f'{len(failed)} validation checks failed: '
                      f'{", ".join(failed[:10])}')


def log_resumed(runner, count):
    if runner.use_wandb:
        wandb.log({'resumed points': count})


class CommandLog:
    """Metrics of a one shot subcommand, sent to wandb as a single step"""

    def __init__(self, config, use_wandb=False, prefix=''):
        self.use_wandb = use_wandb
        self.metrics = {}
        init_logging(config, self, prefix)

    def flush(self):
        if self.use_wandb and self.metrics:
            wandb.log(self.metrics)
        self.metrics = {}
