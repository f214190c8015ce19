from typing import List

from sparse_fading.harness.experiments import Curve, ExperimentSpec, PhaseCell
from sparse_fading.harness.trials import run_phase_cell
from sparse_fading.solver.interior_point import DEFAULT_SETTINGS
from sparse_fading.solver.settings import SolverSettings


def certificate_phase_diagram(N: int, k_grid, M_grid, channel='fading',
                              trials=50, seed=1337, gamma=1.0,
                              settings: SolverSettings = DEFAULT_SETTINGS
                              ) -> List[PhaseCell]:
    """
    Empirical certificate and l1 recovery rates over a (k, M) grid
    Args:
        N: number of nodes
        k_grid: sparsities
        M_grid: numbers of MAC transmissions, every M >= max(k_grid)
        channel: 'fading' or 'awgn'
        trials: trials per cell
        seed: master seed
        gamma: transmission probability of every node
        settings: basis pursuit settings

    Returns: PhaseCell per (k, M), k outer

    """
    spec = ExperimentSpec(experiment='certificate_phase', N=N,
                          k_grid=tuple(k_grid), M_grid=tuple(M_grid),
                          gamma_grid=(gamma,), curves=(Curve(channel),),
                          trials=trials, seed=seed)
    return [run_phase_cell(spec, point, settings) for point in spec.points()]


def sufficiency_violations(cells: List[PhaseCell]) -> List[PhaseCell]:
    """
    Cells with at least one trial where the certificate held and basis
    pursuit missed x. A holding certificate implies exact recovery, so this
    list should be empty
    """
    return [cell for cell in cells if cell.certified_not_recovered > 0]
