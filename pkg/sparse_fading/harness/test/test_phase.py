from unittest import TestCase

from sparse_fading.harness.experiments import PhaseCell
from sparse_fading.harness.phase import (certificate_phase_diagram,
                                         sufficiency_violations)


def cell(certificate_rate, recovery_rate, certified_not_recovered=0):
    return PhaseCell(experiment='certificate_phase', curve='c',
                     channel='fading', policy='uniform', nu_min=1.0,
                     nu_max=1.0, k=1, M=2, gamma=1.0, sigma_v2=0.0, trials=10,
                     certificate_rate=certificate_rate,
                     certificate_standard_error=0.0,
                     recovery_rate=recovery_rate, recovery_standard_error=0.0,
                     certified_not_recovered=certified_not_recovered)


class TestPhaseDiagram(TestCase):
    def test_grid_layout(self):
        cells = certificate_phase_diagram(20, (1, 4), (8, 20), trials=6,
                                          seed=3)

        assert [(c.k, c.M) for c in cells] == [(1, 8), (1, 20), (4, 8),
                                               (4, 20)]
        assert all(c.trials == 6 for c in cells)

    def test_certificate_implies_recovery(self):
        cells = certificate_phase_diagram(24, (2, 6), (6, 12, 24), trials=10,
                                          seed=8, channel='fading')

        assert sufficiency_violations(cells) == []
        for c in cells:
            assert c.certificate_rate <= c.recovery_rate

    def test_easy_cell(self):
        cells = certificate_phase_diagram(40, (1,), (40,), trials=5, seed=1,
                                          channel='awgn')
        assert cells[0].certificate_rate == 1.0
        assert cells[0].recovery_rate == 1.0

    def test_sufficiency_violations(self):
        assert sufficiency_violations([cell(0.5, 0.6)]) == []
        assert sufficiency_violations([cell(0.5, 0.6, 1)]) == \
               [cell(0.5, 0.6, 1)]

    def test_equal_rates_can_hide_a_counterexample(self):
        # one certified miss and one uncertified recovery cancel in the rates
        masked = cell(0.5, 0.5, certified_not_recovered=1)

        assert len(sufficiency_violations([cell(0.5, 0.5), masked])) == 1

    def test_count_within_trials(self):
        with self.assertRaises(ValueError):
            cell(0.5, 0.5, certified_not_recovered=11)
