import ast
import copy

from sparse_fading.errors import ConfigError

DEFAULT_CONFIG = {
    # network
    'N': 100,
    'M': 60,
    'k': 10,
    'signal_low': 10.0,
    'signal_high': 20.0,
    'gamma': 1.0,
    'sigma_a2': 1.0,
    'nu': 1.0,
    'nu_min': 1.0,
    'nu_max': 10.0,
    'sigma_v2': 0.0,
    'energy_cap': None,
    'total_energy': None,
    # solver
    'tolerance': 1e-8,
    'max_iterations': 100,
    'barrier_mu': 10.0,
    'backtrack_alpha': 0.01,
    'backtrack_beta': 0.5,
    'max_backtracks': 32,
    'regularization': 1e-12,
    'barrier_tolerance': 1e-3,
    'newton_max_iterations': 50,
    'feasibility_tolerance': 1e-6,
    'polish': True,
    'exact_threshold': 1e-4,
    'oracle_k_max': 3,
    'oracle_max_n': 20,
    # bounds and design
    'epsilon': 0.01,
    'epsilon_prime': 0.01,
    'c_prime': 1.0,
    'C0': 1.0,
    'c1': 1.0,
    'c1_prime': 1.0,
    'R': None,
    'E_per_node': 1.0,
    'E_total': None,
    # experiments
    'experiment': 'fig1_mse_vs_M',
    'trials': 200,
    'seed': 1337,
    'out': None,
    'M_grid': None,
    'gamma_grid': None,
    'sigma_v2_grid': None,
    'k_grid': None,
    'gamma_low': 0.05,
    'num_workers': 1,
    'resume': False,
    # validation budgets
    'ks_samples': 1_000_000,
    'ks_threshold': 0.005,
    'bernstein_vars': 50,
    'bernstein_trials': 1_000_000,
    'bernstein_batch': 100_000,
    'bernstein_alphas': 10,
    'isotropy_rows': 100_000,
    'isotropy_dim': 20,
    'isotropy_threshold': 0.05,
    # logging
    'use_wandb': False,
    'prefix': 'SWEEP',
}


def parse_value(raw: str):
    """
    Parses the right hand side of a key=value line
    Args:
        raw: text after the '=' sign

    Returns: python literal, tuple for comma separated lists, or the bare
    string if it is not a literal

    """
    raw = raw.strip()
    if raw.lower() in ('none', 'null', ''):
        return None
    if raw.lower() in ('true', 'false'):
        return raw.lower() == 'true'
    try:
        value = ast.literal_eval(raw)
    except (ValueError, SyntaxError):
        if ',' in raw:
            return tuple(parse_value(part) for part in raw.split(','))
        return raw

    if isinstance(value, list):
        value = tuple(value)
    return value


def read_key_values(path: str) -> dict:
    """Reads a key=value file, '#' starts a comment"""
    values = {}
    with open(path, 'r', encoding='utf-8') as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise ConfigError(f'{path}:{line_no}: expected key = value, '
                                  f'got {line!r}')
            key, raw = line.split('=', 1)
            values[key.strip()] = parse_value(raw)

    return values


def load_config(path=None, overrides=None) -> dict:
    """
    Builds the run configuration
    Args:
        path: optional key=value file
        overrides: values that win over file and defaults (CLI flags)

    Returns: new config dict, defaults < file < overrides

    """
    config = copy.deepcopy(DEFAULT_CONFIG)
    if path is not None:
        update_config(config, read_key_values(path))
    if overrides:
        update_config(config, {key: value for key, value in overrides.items()
                               if value is not None})
    return config


def update_config(config: dict, values: dict):
    unknown = sorted(set(values) - set(DEFAULT_CONFIG))
    if unknown:
        raise ConfigError(f'Unknown config keys: {", ".join(unknown)}')
    config.update(values)


def write_key_values(values: dict, path: str):
    with open(path, 'w', encoding='utf-8') as fh:
        for key, value in values.items():
            if isinstance(value, (tuple, list)):
                value = ', '.join(repr(v) for v in value)
            fh.write(f'{key} = {value}\n')
