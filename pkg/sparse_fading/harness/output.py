import math
import os
from dataclasses import asdict
from typing import Dict, Iterable

import pandas as pd
import yaml

from sparse_fading.errors import InputError
from sparse_fading.harness.experiments import (COLUMN_DOCS, CurvePoint,
                                               ExperimentSpec, PhaseCell,
                                               columns_of)
from sparse_fading.solver.settings import SolverSettings

FLOAT_FORMAT = '%.10g'
ORDERING_ATOL = 1e-6
ORDERING_COLUMNS = ('better', 'worse', 'gamma', 'sigma_v2', 'M', 'error_better',
                    'error_worse', 'gap', 'combined_standard_error',
                    'ordered', 'resolved')
NOISE_TREND_COLUMNS = ('curve', 'gamma', 'M', 'sigma_v2_min', 'sigma_v2_max',
                       'nondecreasing', 'resolved')


def row_type(spec: ExperimentSpec):
    return PhaseCell if spec.is_phase else CurvePoint


def partial_path(out: str) -> str:
    root, _ = os.path.splitext(out)
    return root + '.partial.csv'


def meta_path(out: str) -> str:
    root, _ = os.path.splitext(out)
    return root + '.meta.yaml'


def make_parent(path: str):
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)


def to_frame(rows: Iterable, columns) -> pd.DataFrame:
    return pd.DataFrame([asdict(row) for row in rows], columns=list(columns))


def write_rows(rows, row_class, path: str):
    make_parent(path)
    to_frame(rows, columns_of(row_class)).to_csv(path, index=False,
                                                 float_format=FLOAT_FORMAT)


def append_partial(row, path: str):
    """Appends one finished grid point, the header goes in on creation"""
    make_parent(path)
    frame = to_frame([row], columns_of(type(row)))
    frame.to_csv(path, mode='a', index=False, float_format=FLOAT_FORMAT,
                 header=not os.path.exists(path))


def load_rows(path: str, row_class) -> Dict[tuple, object]:
    """
    Reads a curve or partial CSV back into rows
    Returns: dict from the point key to the row, empty if the file is missing
    """
    if not os.path.exists(path):
        return {}
    frame = pd.read_csv(path)
    columns = columns_of(row_class)
    missing = set(columns) - set(frame.columns)
    if missing:
        raise InputError(f'{path} lacks columns {sorted(missing)}')

    rows = {}
    for record in frame[list(columns)].to_dict(orient='records'):
        row = row_class(**{name: python_scalar(value)
                           for name, value in record.items()})
        rows[row.key] = row
    return rows


def python_scalar(value):
    return value.item() if hasattr(value, 'item') else value


def write_metadata(spec: ExperimentSpec, settings: SolverSettings,
                   path: str):
    """YAML sidecar with the experiment, solver settings and columns"""
    make_parent(path)
    columns = columns_of(row_type(spec))
    meta = {'experiment': spec.experiment,
            'seed': spec.seed,
            'spec': spec.to_dict(),
            'solver': asdict(settings),
            'columns': {name: COLUMN_DOCS[name] for name in columns},
            'column_order': list(columns)}
    with open(path, 'w', encoding='utf-8') as fh:
        yaml.safe_dump(meta, fh, sort_keys=False, default_flow_style=False)


def read_curve(curve) -> pd.DataFrame:
    return pd.read_csv(curve) if isinstance(curve, str) else curve


def summarize_curve(curve) -> pd.DataFrame:
    """
    Per curve checks of a curve CSV
    Args:
        curve: path of the CSV or the DataFrame itself

    Returns: one row per (curve, gamma, sigma_v2) with monotone (mean error
    nonincreasing in M within one standard error), the largest M and the
    mean error and standard error there

    """
    frame = read_curve(curve)
    summary = []
    for (label, gamma, sigma_v2), group in frame.groupby(
            ['curve', 'gamma', 'sigma_v2'], sort=False):
        group = group.sort_values('M')
        errors = group['mean_error'].to_numpy()
        se = group['standard_error'].to_numpy()
        monotone = bool(all(errors[i + 1] <= errors[i] + max(se[i], se[i + 1])
                            for i in range(len(errors) - 1)))
        last = group.iloc[-1]
        summary.append({'curve': label, 'gamma': gamma, 'sigma_v2': sigma_v2,
                        'monotone': monotone, 'M_max': int(last['M']),
                        'error_at_M_max': float(last['mean_error']),
                        'standard_error_at_M_max': float(
                            last['standard_error'])})

    return pd.DataFrame(summary)


def ordering_checks(curve, pairs, margin=2.0, atol=ORDERING_ATOL
                    ) -> pd.DataFrame:
    """
    Cross curve comparisons at the largest M both curves share
    Args:
        curve: path of the CSV or the DataFrame itself
        pairs: (better, worse) curve labels, better expected to have the
            smaller mean error
        margin: standard errors a gap needs to count as resolved
        atol: absolute slack, errors this close count as tied

    Returns: one row per (better, worse, gamma, sigma_v2). ordered is
    better <= worse within one combined standard error plus atol, resolved
    is worse - better > margin combined standard errors

    """
    frame = read_curve(curve)
    keys = ['gamma', 'sigma_v2', 'M']
    rows = []
    for better, worse in pairs:
        merged = frame[frame['curve'] == better].merge(
            frame[frame['curve'] == worse], on=keys,
            suffixes=('_better', '_worse'))
        for (gamma, sigma_v2), group in merged.groupby(['gamma', 'sigma_v2'],
                                                       sort=False):
            last = group.loc[group['M'].idxmax()]
            se = math.hypot(last['standard_error_better'],
                            last['standard_error_worse'])
            gap = float(last['mean_error_worse'] - last['mean_error_better'])
            rows.append({'better': better, 'worse': worse, 'gamma': gamma,
                         'sigma_v2': sigma_v2, 'M': int(last['M']),
                         'error_better': float(last['mean_error_better']),
                         'error_worse': float(last['mean_error_worse']),
                         'gap': gap, 'combined_standard_error': se,
                         'ordered': gap >= -(se + atol),
                         'resolved': gap > margin * se + atol})

    return pd.DataFrame(rows, columns=ORDERING_COLUMNS)


def noise_trend(curve, margin=2.0, atol=ORDERING_ATOL) -> pd.DataFrame:
    """
    Growth of the mean error with the receiver noise at matched M
    Args:
        curve: path of the CSV or the DataFrame itself
        margin: standard errors every step needs to count as resolved
        atol: absolute slack of the nondecreasing check

    Returns: one row per (curve, gamma, M) with at least two noise levels,
    nondecreasing within one standard error per step and resolved when
    every step grows by more than margin combined standard errors

    """
    frame = read_curve(curve)
    rows = []
    for (label, gamma, M), group in frame.groupby(['curve', 'gamma', 'M'],
                                                  sort=False):
        if group['sigma_v2'].nunique() < 2:
            continue
        group = group.sort_values('sigma_v2')
        errors = group['mean_error'].to_numpy()
        se = group['standard_error'].to_numpy()
        steps = [(errors[i + 1] - errors[i], math.hypot(se[i], se[i + 1]))
                 for i in range(len(errors) - 1)]
        rows.append({'curve': label, 'gamma': gamma, 'M': int(M),
                     'sigma_v2_min': float(group['sigma_v2'].iloc[0]),
                     'sigma_v2_max': float(group['sigma_v2'].iloc[-1]),
                     'nondecreasing': all(gap >= -(s + atol)
                                          for gap, s in steps),
                     'resolved': all(gap > margin * s + atol
                                     for gap, s in steps)})

    return pd.DataFrame(rows, columns=NOISE_TREND_COLUMNS)
