from dataclasses import asdict, dataclass, fields, replace
from typing import Tuple

from sparse_fading.errors import ParameterError

CURVE_EXPERIMENTS = ('fig1_mse_vs_M', 'fig2_mse_vs_gamma', 'fig3_noniid',
                     'fig4_opt_gamma', 'fig5_noise')
VALIDATION_EXPERIMENTS = ('bernstein_validate', 'pdf_validate')
EXPERIMENTS = CURVE_EXPERIMENTS + VALIDATION_EXPERIMENTS + (
    'certificate_phase',)

CHANNEL_MODES = ('fading', 'awgn')
GAMMA_POLICIES = ('uniform', 'optimal', 'random')

M_SWEEP = tuple(range(20, 101, 10))


@dataclass(frozen=True)
class Curve:
    """
    One line of a figure
    Args:
        channel: 'fading' for B = H * A, 'awgn' for B = A
        policy: 'uniform' gamma_j = gamma, 'optimal' gamma_j matched to the
            channels with gamma_bar = gamma, 'random' gamma_j ~ U[gamma_low, 1]
        nu_min: smallest Rayleigh scale
        nu_max: largest Rayleigh scale, nu_j ~ U[nu_min, nu_max] if larger
    """
    channel: str = 'fading'
    policy: str = 'uniform'
    nu_min: float = 1.0
    nu_max: float = 1.0

    def __post_init__(self):
        if self.channel not in CHANNEL_MODES:
            raise ParameterError(f'unknown channel mode {self.channel!r}, '
                                 f'expected one of {CHANNEL_MODES}')
        if self.policy not in GAMMA_POLICIES:
            raise ParameterError(f'unknown gamma policy {self.policy!r}, '
                                 f'expected one of {GAMMA_POLICIES}')
        if not 0 < self.nu_min <= self.nu_max:
            raise ParameterError(f'need 0 < nu_min <= nu_max, got '
                                 f'{self.nu_min}, {self.nu_max}')

    @property
    def label(self) -> str:
        return f'{self.channel}-{self.policy}-nu{self.nu_min:g}-{self.nu_max:g}'

    @property
    def identical_channels(self) -> bool:
        return self.nu_min == self.nu_max


@dataclass(frozen=True)
class GridPoint:
    curve: Curve
    k: int
    M: int
    gamma: float
    sigma_v2: float

    @property
    def key(self) -> tuple:
        return (self.curve.label, self.k, self.M, self.gamma, self.sigma_v2)


@dataclass(frozen=True)
class ExperimentSpec:
    """
    Everything that determines the output of a run
    Args:
        experiment: experiment id, see EXPERIMENTS
        N: number of nodes
        k: sparsity of the curve experiments
        M_grid: numbers of MAC transmissions
        gamma_grid: transmission probability (uniform) or gamma_bar (optimal)
        sigma_v2_grid: receiver noise variances, 0 solves basis pursuit
        k_grid: sparsities of the certificate phase diagram
        curves: lines drawn at every grid point
        trials: independent (signal, ensemble, solve) triples per point
        seed: master seed, all trial seeds derive from it
        out: path of the CSV written by the run
    """
    experiment: str
    N: int = 100
    k: int = 10
    M_grid: Tuple[int, ...] = M_SWEEP
    gamma_grid: Tuple[float, ...] = (1.0,)
    sigma_v2_grid: Tuple[float, ...] = (0.0,)
    k_grid: Tuple[int, ...] = (10,)
    curves: Tuple[Curve, ...] = (Curve(),)
    trials: int = 200
    seed: int = 1337
    out: str = 'results/experiment.csv'
    signal_low: float = 10.0
    signal_high: float = 20.0
    sigma_a2: float = 1.0
    gamma_low: float = 0.05

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ParameterError(f'unknown experiment {self.experiment!r}, '
                                 f'expected one of {EXPERIMENTS}')
        for name in ('M_grid', 'gamma_grid', 'sigma_v2_grid', 'k_grid',
                     'curves'):
            if len(getattr(self, name)) == 0:
                raise ParameterError(f'{name} must not be empty')
        if self.trials < 1:
            raise ParameterError(f'trials must be >= 1, got {self.trials}')
        if min(self.M_grid) < 1 or max(self.M_grid) > self.N:
            raise ParameterError(f'M grid must lie in [1, N={self.N}]')
        if any(not 0 < g <= 1 for g in self.gamma_grid):
            raise ParameterError('gamma grid must lie in (0, 1]')
        if min(self.sigma_v2_grid) < 0:
            raise ParameterError('noise variances must be nonnegative')
        if not 0 < self.gamma_low <= 1:
            raise ParameterError('gamma_low must lie in (0, 1]')
        if not 0 < self.signal_low <= self.signal_high:
            raise ParameterError('need 0 < signal_low <= signal_high')
        if self.sigma_a2 <= 0:
            raise ParameterError('sigma_a2 must be positive')
        for k in self.sparsities:
            if not 1 <= k <= self.N:
                raise ParameterError(f'sparsity {k} outside [1, N={self.N}]')
        if self.is_phase and max(self.k_grid) > min(self.M_grid):
            raise ParameterError('the phase diagram needs k <= M in every '
                                 'cell')

    @property
    def is_phase(self) -> bool:
        return self.experiment == 'certificate_phase'

    @property
    def is_validation(self) -> bool:
        return self.experiment in VALIDATION_EXPERIMENTS

    @property
    def sparsities(self) -> Tuple[int, ...]:
        return self.k_grid if self.is_phase else (self.k,)

    def points(self):
        """Grid points in canonical order, curves outermost"""
        noise = (0.0,) if self.is_phase else self.sigma_v2_grid
        return [GridPoint(curve=curve, k=k, M=M, gamma=gamma,
                          sigma_v2=sigma_v2)
                for curve in self.curves
                for k in self.sparsities
                for gamma in self.gamma_grid
                for sigma_v2 in noise
                for M in self.M_grid]

    def to_dict(self) -> dict:
        values = asdict(self)
        values['curves'] = [asdict(curve) for curve in self.curves]
        for name in ('M_grid', 'gamma_grid', 'sigma_v2_grid', 'k_grid'):
            values[name] = list(values[name])
        return values

    @classmethod
    def preset(cls, experiment: str, **overrides) -> 'ExperimentSpec':
        if experiment not in PRESETS:
            raise ParameterError(f'unknown experiment {experiment!r}, '
                                 f'expected one of {EXPERIMENTS}')
        values = dict(PRESETS[experiment], experiment=experiment,
                      out=f'results/{experiment}.csv')
        values.update(overrides)
        return cls(**values)

    @classmethod
    def from_config(cls, config: dict) -> 'ExperimentSpec':
        """Preset of config['experiment'] with the config values on top"""
        experiment = config['experiment']
        spec = cls.preset(experiment)
        overrides = {'N': config['N'], 'k': config['k'],
                     'trials': config['trials'], 'seed': config['seed'],
                     'signal_low': config['signal_low'],
                     'signal_high': config['signal_high'],
                     'sigma_a2': config['sigma_a2'],
                     'gamma_low': config['gamma_low']}
        if config['out'] is not None:
            overrides['out'] = config['out']
        for name in ('M_grid', 'gamma_grid', 'sigma_v2_grid', 'k_grid'):
            if config[name] is not None:
                overrides[name] = as_grid(config[name])
        return replace(spec, **overrides)


def as_grid(value) -> tuple:
    if isinstance(value, (tuple, list)):
        return tuple(value)
    return (value,)


IID = (Curve('fading', 'uniform'), Curve('awgn', 'uniform'))
SPREAD_10 = dict(nu_min=1.0, nu_max=10.0)
SPREAD_5 = dict(nu_min=1.0, nu_max=5.0)

PRESETS = {
    'fig1_mse_vs_M': dict(gamma_grid=(0.1, 0.3, 0.6, 1.0), curves=IID),
    'fig2_mse_vs_gamma': dict(
        M_grid=(30, 50, 70),
        gamma_grid=(0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0),
        curves=IID),
    'fig3_noniid': dict(gamma_grid=(0.5, 1.0),
                        curves=(Curve('fading', 'uniform', **SPREAD_10),
                                Curve('awgn', 'uniform'))),
    'fig4_opt_gamma': dict(curves=(
        Curve('awgn', 'uniform'),
        Curve('fading', 'optimal', **SPREAD_10),
        Curve('fading', 'uniform', **SPREAD_10),
        Curve('fading', 'random', **SPREAD_10),
        Curve('fading', 'optimal', **SPREAD_5),
        Curve('fading', 'uniform', **SPREAD_5),
        Curve('fading', 'random', **SPREAD_5))),
    'fig5_noise': dict(M_grid=tuple(range(40, 101, 10)),
                       sigma_v2_grid=(0.1, 0.5, 1.0, 2.0),
                       curves=(Curve('fading', 'optimal', **SPREAD_10),
                               Curve('fading', 'random', **SPREAD_10))),
    'certificate_phase': dict(M_grid=(10, 20, 40, 60, 80, 100),
                              k_grid=(1, 2, 5, 10), curves=(Curve(),),
                              trials=50),
    'bernstein_validate': dict(),
    'pdf_validate': dict(),
}

AWGN = Curve('awgn', 'uniform').label


def fading(policy: str, spread: dict) -> str:
    return Curve('fading', policy, **spread).label


# (better, worse) pairs at the largest M, checked by output.ordering_checks
EXPECTED_ORDERINGS = {
    'fig3_noniid': ((AWGN, fading('uniform', SPREAD_10)),),
    'fig4_opt_gamma': tuple(
        pair for spread in (SPREAD_10, SPREAD_5) for pair in (
            (AWGN, fading('optimal', spread)),
            (fading('optimal', spread), fading('uniform', spread)),
            (fading('optimal', spread), fading('random', spread)))),
    'fig5_noise': ((fading('optimal', SPREAD_10),
                    fading('random', SPREAD_10)),),
}


@dataclass(frozen=True)
class CurvePoint:
    """
    Monte Carlo summary of one grid point. mean_error averages the relative
    l2 error over the trials, exact_rate is the fraction below the exact
    recovery threshold. Non converged and infeasible solves contribute their
    best estimate and are counted separately.
    """
    experiment: str
    curve: str
    channel: str
    policy: str
    nu_min: float
    nu_max: float
    k: int
    M: int
    gamma: float
    sigma_v2: float
    trials: int
    mean_error: float
    standard_error: float
    exact_rate: float
    exact_standard_error: float
    nonconverged: int = 0
    infeasible: int = 0

    def __post_init__(self):
        if not 0.0 <= self.exact_rate <= 1.0:
            raise ParameterError('exact_rate must lie in [0, 1]')
        if self.standard_error < 0 or self.exact_standard_error < 0:
            raise ParameterError('standard errors must be nonnegative')

    @property
    def key(self) -> tuple:
        return (self.curve, self.k, self.M, self.gamma, self.sigma_v2)


@dataclass(frozen=True)
class PhaseCell:
    """
    One (k, M) cell of the certificate phase diagram. certified_not_recovered
    counts trials where the certificate held and basis pursuit still missed
    x, a nonzero count contradicts the sufficiency of the certificate.
    rank_deficient counts trials where B_S had dependent columns and the
    certificate is undefined.
    """
    experiment: str
    curve: str
    channel: str
    policy: str
    nu_min: float
    nu_max: float
    k: int
    M: int
    gamma: float
    sigma_v2: float
    trials: int
    certificate_rate: float
    certificate_standard_error: float
    recovery_rate: float
    recovery_standard_error: float
    certified_not_recovered: int = 0
    rank_deficient: int = 0
    infeasible: int = 0

    def __post_init__(self):
        for rate in (self.certificate_rate, self.recovery_rate):
            if not 0.0 <= rate <= 1.0:
                raise ParameterError('rates must lie in [0, 1]')
        if not 0 <= self.certified_not_recovered <= self.trials:
            raise ParameterError('certified_not_recovered must lie in '
                                 '[0, trials]')

    @property
    def key(self) -> tuple:
        return (self.curve, self.k, self.M, self.gamma, self.sigma_v2)


def columns_of(row_type) -> Tuple[str, ...]:
    return tuple(f.name for f in fields(row_type))


COLUMN_DOCS = {
    'experiment': 'experiment id',
    'curve': 'curve label channel-policy-nu<min>-<max>',
    'channel': 'fading (B = H * A) or awgn (B = A)',
    'policy': 'uniform, optimal or random transmission probabilities',
    'nu_min': 'smallest Rayleigh scale',
    'nu_max': 'largest Rayleigh scale',
    'k': 'sparsity of the signal',
    'M': 'number of MAC transmissions',
    'gamma': 'transmission probability (uniform) or its cap (optimal)',
    'sigma_v2': 'receiver noise variance, 0 means basis pursuit',
    'trials': 'independent trials at the point',
    'mean_error': 'mean of ||x - x_hat||_2 / ||x||_2',
    'standard_error': 'standard error of mean_error',
    'exact_rate': 'fraction of trials with relative error below the exact '
                  'recovery threshold',
    'exact_standard_error': 'binomial standard error of exact_rate',
    'nonconverged': 'solves stopped by the iteration cap or a stalled line '
                    'search',
    'infeasible': 'solves with no feasible point, scored as x_hat = 0',
    'certificate_rate': 'fraction of trials where the dual certificate holds',
    'certificate_standard_error': 'binomial standard error of '
                                  'certificate_rate',
    'recovery_rate': 'fraction of trials exactly recovered by basis pursuit',
    'recovery_standard_error': 'binomial standard error of recovery_rate',
    'certified_not_recovered': 'trials where the certificate held and basis '
                               'pursuit did not recover x exactly',
    'rank_deficient': 'trials with rank deficient B_S',
}
