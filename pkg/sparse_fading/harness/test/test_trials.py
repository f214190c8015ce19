from types import SimpleNamespace
from unittest import TestCase, mock

import torch as T

from sparse_fading.errors import InfeasibleError
from sparse_fading.harness import trials as trials_module
from sparse_fading.harness.experiments import Curve, ExperimentSpec, GridPoint
from sparse_fading.harness.trials import (draw_problem, run_phase_cell,
                                          run_point, trial_generator,
                                          trial_network)
from sparse_fading.solver.interior_point import DEFAULT_SETTINGS


def small_spec(**overrides):
    values = dict(experiment='fig4_opt_gamma', N=20, k=2, M_grid=(10,),
                  trials=4, seed=5)
    values.update(overrides)
    return ExperimentSpec(**values)


def point_of(curve, M=10, gamma=1.0, sigma_v2=0.0, k=2):
    return GridPoint(curve=curve, k=k, M=M, gamma=gamma, sigma_v2=sigma_v2)


class TestTrialNetwork(TestCase):
    def test_uniform(self):
        spec = small_spec()
        cfg = trial_network(spec, point_of(Curve(), gamma=0.3),
                            trial_generator(spec, point_of(Curve()), 0, 'c'))

        assert T.allclose(cfg.gamma, T.full((20,), 0.3, dtype=T.float64))
        assert T.allclose(cfg.nu, T.ones(20, dtype=T.float64))

    def test_optimal_equalizes(self):
        spec = small_spec()
        curve = Curve('fading', 'optimal', 1.0, 10.0)
        point = point_of(curve, gamma=0.8)
        cfg = trial_network(spec, point,
                            trial_generator(spec, point, 0, 'channel'))
        weighted = cfg.gamma * cfg.nu ** 2

        assert T.allclose(weighted, weighted[0].expand(20))
        assert abs(cfg.gamma.max().item() - 0.8) < 1e-12
        assert ((cfg.nu >= 1.0) & (cfg.nu <= 10.0)).all()

    def test_random(self):
        spec = small_spec(gamma_low=0.2)
        point = point_of(Curve('fading', 'random', 1.0, 5.0))
        cfg = trial_network(spec, point,
                            trial_generator(spec, point, 1, 'channel'))

        assert ((cfg.gamma >= 0.2) & (cfg.gamma <= 1.0)).all()
        assert cfg.gamma.unique().numel() == 20


class TestDrawProblem(TestCase):
    def test_curves_share_signal_and_projection(self):
        spec = small_spec()
        x_fading, fading = draw_problem(spec, point_of(Curve('fading')), 2)
        x_awgn, awgn = draw_problem(spec, point_of(Curve('awgn')), 2)

        assert T.equal(x_fading.values, x_awgn.values)
        assert T.equal(fading.A, awgn.A)
        assert T.equal(awgn.B, awgn.A)
        assert not T.equal(fading.B, fading.A)

    def test_trials_differ(self):
        spec = small_spec()
        x0, _ = draw_problem(spec, point_of(Curve()), 0)
        x1, _ = draw_problem(spec, point_of(Curve()), 1)

        assert not T.equal(x0.values, x1.values)


class TestRunPoint(TestCase):
    def test_determined_system_is_exact(self):
        spec = small_spec(N=20, k=3, M_grid=(20,), trials=5)
        row = run_point(spec, point_of(Curve('awgn'), M=20, k=3),
                        DEFAULT_SETTINGS)

        assert row.exact_rate == 1.0
        assert row.mean_error < 1e-6
        assert row.nonconverged == 0 and row.infeasible == 0

    def test_noisy_point(self):
        spec = small_spec(N=30, k=3, M_grid=(20,), sigma_v2_grid=(0.5,),
                          trials=3)
        row = run_point(spec, point_of(Curve(), M=20, k=3, sigma_v2=0.5),
                        DEFAULT_SETTINGS)

        assert row.trials == 3
        assert 0.0 < row.mean_error < 1.0
        assert row.standard_error >= 0.0

    def test_phase_cell_easy(self):
        spec = ExperimentSpec(experiment='certificate_phase', N=40,
                              k_grid=(1,), M_grid=(40,), trials=5, seed=2)
        cell = run_phase_cell(spec, spec.points()[0], DEFAULT_SETTINGS)

        assert cell.certificate_rate == 1.0
        assert cell.recovery_rate == 1.0
        assert cell.rank_deficient == 0
        assert cell.certified_not_recovered == 0
        assert cell.infeasible == 0


class TestPhaseCellCounterexamples(TestCase):
    def setUp(self):
        self.spec = ExperimentSpec(experiment='certificate_phase', N=40,
                                   k_grid=(1,), M_grid=(40,), trials=5,
                                   seed=2)
        self.point = self.spec.points()[0]

    def test_certified_but_missed(self):
        missed = SimpleNamespace(x_hat=T.zeros(40, dtype=T.float64))
        with mock.patch.object(trials_module, 'basis_pursuit',
                               return_value=missed):
            with self.assertWarns(UserWarning):
                cell = run_phase_cell(self.spec, self.point,
                                      DEFAULT_SETTINGS)

        assert cell.certificate_rate == 1.0
        assert cell.recovery_rate == 0.0
        assert cell.certified_not_recovered == 5

    def test_infeasible_solve_is_scored_not_raised(self):
        with mock.patch.object(trials_module, 'basis_pursuit',
                               side_effect=InfeasibleError('no point')):
            with self.assertWarns(UserWarning):
                cell = run_phase_cell(self.spec, self.point,
                                      DEFAULT_SETTINGS)

        assert cell.infeasible == 5
        assert cell.recovery_rate == 0.0
        assert cell.certified_not_recovered == 5
