import math

import pandas as pd
import pytest

from eigensense.errors import ConfigError, DomainError, SweepError
from eigensense.montecarlo import (
    CSV_COLUMNS, ExperimentSpec, TrialRecord, run_detector_comparison, run_experiment,
    run_point, run_ratio_convergence, summarize, wilson_interval
)
from eigensense.rmt import ratio_threshold, spiked_ratio
from eigensense.signal import Hypothesis


def record(index, truth, label, lmin=1.0, lmax=2.0):
    return TrialRecord(index, Hypothesis(truth), {'eig-ratio': Hypothesis(label)}, lmin, lmax)


class TestWilson:

    def test_ninety_five_of_hundred(self):
        low, high = wilson_interval(95, 100)
        assert low == pytest.approx(0.888249, abs=1e-3)
        assert high == pytest.approx(0.978455, abs=1e-3)

    def test_all_correct(self):
        low, high = wilson_interval(100, 100)
        assert high == 1.0
        assert low < 1.0

    def test_single_trial(self):
        assert wilson_interval(1, 1) == (0.0, 1.0)
        assert wilson_interval(0, 1) == (0.0, 1.0)

    @pytest.mark.parametrize('successes, n', [(0, 0), (5, 4), (-1, 3)])
    def test_domain(self, successes, n):
        with pytest.raises(DomainError):
            wilson_interval(successes, n)


class TestSummarize:

    def test_all_correct(self):
        records = [record(i, 'H1', 'H1') for i in range(100)]
        p = summarize(records).proportion('eig-ratio')
        assert p.proportion == 1.0
        assert p.ci_high == 1.0

    def test_half_correct(self):
        records = [record(i, 'H1', 'H1' if i % 2 else 'H0') for i in range(100)]
        assert summarize(records).proportion('eig-ratio').proportion == 0.5

    def test_empty(self):
        with pytest.raises(DomainError):
            summarize([])

    def test_mean_ratio_and_stderr(self):
        records = [record(0, 'H0', 'H0', 1.0, 2.0), record(1, 'H0', 'H0', 1.0, 4.0)]
        point = summarize(records, asymptote=6.0)
        assert point.mean_ratio == 3.0
        assert point.ratio_stderr == pytest.approx(1.0)
        assert point.ratio_to_asymptote == pytest.approx(0.5)

    def test_single_record(self):
        point = summarize([record(0, 'H0', 'H0')])
        assert math.isnan(point.ratio_stderr)
        p = point.proportion('eig-ratio')
        assert (p.ci_low, p.ci_high) == (0.0, 1.0)

    def test_order_independent(self):
        records = [record(i, 'H0' if i % 3 else 'H1', 'H0', 1.0, 1.0 + i / 7) for i in range(30)]
        assert summarize(records) == summarize(list(reversed(records)))

    def test_decomposition(self):
        records = [
            record(0, 'H0', 'H0'), record(1, 'H1', 'H1'),
            record(2, 'H0', 'H1'), record(3, 'H1', 'H1'),
        ]
        p = summarize(records).proportion('eig-ratio')
        assert p.specificity == 0.5
        assert p.sensitivity == 1.0
        assert p.proportion == pytest.approx((p.sensitivity + p.specificity) / 2, abs=1e-12)


class TestExperimentSpec:

    def test_non_integral_sweep(self):
        with pytest.raises(SweepError):
            ExperimentSpec('bad', 'convergence', Ns=(20, 25), alpha=0.3, hypothesis='H0')

    def test_convergence_needs_hypothesis(self):
        with pytest.raises(ConfigError):
            ExperimentSpec('bad', 'convergence', Ns=(20,), alpha=0.5)

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            ExperimentSpec('bad', 'roc', Ns=(20,))

    def test_energy_vote_needs_variance(self):
        with pytest.raises(ConfigError):
            ExperimentSpec('bad', 'comparison', Ns=(20,), K=10, known_variance=False,
                           detectors=('eig-ratio', 'energy-vote'))

    def test_default_detectors(self):
        known = ExperimentSpec('c', 'comparison', Ns=(20,), K=10)
        blind = ExperimentSpec('c', 'comparison', Ns=(20,), K=10, known_variance=False)
        assert known.detectors == ('eig-ratio', 'energy-vote')
        assert blind.detectors == ('eig-ratio',)

    def test_sweep(self):
        spec = ExperimentSpec('c', 'convergence', Ns=(20, 50), alpha=0.1, hypothesis='H0')
        assert spec.sweep() == [(2, 20), (5, 50)]

    def test_balanced_truth(self):
        spec = ExperimentSpec('c', 'comparison', Ns=(20,), K=10)
        truths = [spec.truth(i) for i in range(11)]
        assert abs(truths.count(Hypothesis.H0) - truths.count(Hypothesis.H1)) <= 1

    def test_noise_variance_total(self):
        h0 = ExperimentSpec('c', 'convergence', Ns=(20,), alpha=0.5, hypothesis='H0')
        h1 = ExperimentSpec('c', 'convergence', Ns=(20,), alpha=0.5, hypothesis='H1', rho_db=-5)
        assert h1.snr == 'total'
        assert h0.noise_variance(10) == 1.0
        assert h1.noise_variance(10) == pytest.approx(10 ** 0.5)

    def test_noise_variance_per_sensor(self):
        spec = ExperimentSpec('c', 'comparison', Ns=(20,), K=10, rho_db=-5)
        assert spec.snr == 'per-sensor'
        assert spec.noise_variance(10) == pytest.approx(10 ** 0.5 / 10)
        assert spec.scenario(10, 20, 1).sigma2 == pytest.approx(10 ** 0.5 / 10)

    def test_comparison_total_snr(self):
        spec = ExperimentSpec('c', 'comparison', Ns=(20,), K=10, rho_db=-5, snr='total')
        assert spec.noise_variance(10) == pytest.approx(10 ** 0.5)

    def test_unknown_snr_convention(self):
        with pytest.raises(ConfigError):
            ExperimentSpec('bad', 'comparison', Ns=(20,), K=10, snr='per-antenna')

    def test_samples(self):
        spec = ExperimentSpec('c', 'convergence', Ns=(20,), alpha=0.5, hypothesis='H0',
                              samples='real')
        assert spec.scenario(10, 20, 0).samples == 'real'
        with pytest.raises(ConfigError):
            ExperimentSpec('bad', 'convergence', Ns=(20,), alpha=0.5, hypothesis='H0',
                           samples='quaternion')

    def test_detector_params_must_name_a_detector(self):
        with pytest.raises(ConfigError):
            ExperimentSpec('bad', 'comparison', Ns=(20,), K=10,
                           detector_params={'mp-support': {'slack': 0.1}})
        with pytest.raises(ConfigError):
            ExperimentSpec('bad', 'comparison', Ns=(20,), K=10,
                           detector_params={'energy-vote': 2.0})

    def test_asymptotes(self):
        h0 = ExperimentSpec('c', 'convergence', Ns=(20,), alpha=0.5, hypothesis='H0')
        h1 = ExperimentSpec('c', 'convergence', Ns=(20,), alpha=0.1, hypothesis='H1', rho_db=0)
        assert h0.asymptote(10, 20) == pytest.approx(ratio_threshold(0.5))
        assert h1.asymptote(2, 20) == pytest.approx(spiked_ratio(1.0, 0.1))
        assert math.isnan(h0.asymptote(20, 20))


class TestRunners:

    def test_convergence_frame(self):
        summary = run_ratio_convergence(0.5, [20, 40], Hypothesis.H0, trials=20, seed=3)
        frame = summary.to_frame()
        assert list(frame.columns) == CSV_COLUMNS
        assert list(frame['N']) == [20, 40]
        assert (frame['trials'] == 20).all()
        assert (frame['seed'] == 3).all()
        assert (frame['ratio_to_asymptote'] > 0).all()

    def test_comparison_frame(self):
        summary = run_detector_comparison(10, [20, 30], trials=10, seed=4)
        frame = summary.to_frame()
        assert len(frame) == 4
        assert set(frame['detector']) == {'eig-ratio', 'energy-vote'}
        assert frame['proportion_correct'].between(0, 1).all()

    def test_single_trial_degenerate_interval(self):
        summary = run_detector_comparison(4, [8], trials=1, seed=5, known_variance=False)
        p = summary.point(8).proportion('eig-ratio')
        assert (p.ci_low, p.ci_high) == (0.0, 1.0)

    def test_k_equal_n_not_applicable(self):
        summary = run_detector_comparison(10, [10, 20], trials=6, seed=6)
        point = summary.point(10)
        assert math.isnan(point.proportion('eig-ratio').proportion)
        assert not math.isnan(point.proportion('energy-vote').proportion)
        assert any('eig-ratio not applicable' in note for note in summary.notes)

    def test_h1_below_detectability_noted(self):
        summary = run_ratio_convergence(0.5, [20], Hypothesis.H1, trials=4, seed=7, rho_db=-5)
        assert any("b'/a asymptote" in note for note in summary.notes)

    def test_deterministic_across_thread_counts(self):
        spec = ExperimentSpec('det', 'comparison', Ns=(20, 30), K=6, trials=24,
                              master_seed=11)
        serial = run_experiment(spec, threads=1).to_frame()
        parallel = run_experiment(spec, threads=2).to_frame()
        pd.testing.assert_frame_equal(serial, parallel)

    def test_records_sorted_and_balanced(self):
        spec = ExperimentSpec('bal', 'comparison', Ns=(20,), K=5, trials=11)
        records = run_point(spec, 5, 20)
        assert [r.trial_index for r in records] == list(range(11))
        truths = [r.truth for r in records]
        assert abs(truths.count(Hypothesis.H0) - truths.count(Hypothesis.H1)) <= 1

    def test_jacobi_and_lapack_agree(self):
        kwargs = dict(alpha=0.5, Ns=[10], hypothesis=Hypothesis.H0, trials=5, seed=8)
        jacobi = run_ratio_convergence(solver='jacobi', **kwargs).point(10)
        lapack = run_ratio_convergence(solver='lapack', **kwargs).point(10)
        assert jacobi.mean_ratio == pytest.approx(lapack.mean_ratio, rel=1e-8)

    def test_detector_params_reach_the_detectors(self):
        summary = run_detector_comparison(
            4, [20], trials=20, seed=9, detector_params={'energy-vote': {'vt': 1e9}},
        )
        p = summary.point(20).proportion('energy-vote')
        assert p.specificity == 1.0
        assert p.sensitivity == 0.0

    def test_support_slack_from_params(self):
        spec = ExperimentSpec('slack', 'comparison', Ns=(20,), K=4, trials=20, master_seed=10,
                              detectors=('mp-support',),
                              detector_params={'mp-support': {'slack': 100.0}})
        p = run_experiment(spec, threads=1).point(20).proportion('mp-support')
        assert p.specificity == 1.0
        assert p.sensitivity == 0.0

    def test_real_samples_run(self):
        summary = run_ratio_convergence(0.5, [20], Hypothesis.H1, trials=4, seed=12,
                                        samples='real')
        assert summary.spec.samples == 'real'
        assert summary.point(20).mean_ratio > 0


@pytest.mark.slow
class TestReproduction:

    @pytest.mark.parametrize('alpha, low, high', [(0.5, 0.76, 0.86), (0.1, 0.78, 0.88)])
    def test_h0_convergence_at_n100(self, alpha, low, high):
        summary = run_ratio_convergence(alpha, [100], Hypothesis.H0, trials=2000, seed=2008,
                                        samples='real')
        assert low <= summary.point(100).ratio_to_asymptote <= high

    @pytest.mark.parametrize('alpha, low, high', [(0.5, 0.63, 0.77), (0.1, 0.76, 0.90)])
    def test_h1_convergence_at_n100(self, alpha, low, high):
        summary = run_ratio_convergence(alpha, [100], Hypothesis.H1, trials=2000, seed=2008,
                                        samples='real')
        assert low <= summary.point(100).ratio_to_asymptote <= high

    @pytest.mark.parametrize('hypothesis', [Hypothesis.H0, Hypothesis.H1])
    @pytest.mark.parametrize('alpha', [0.5, 0.1])
    def test_convergence_monotone(self, alpha, hypothesis):
        summary = run_ratio_convergence(alpha, [50, 400], hypothesis, trials=1000, seed=2008,
                                        samples='real')
        assert summary.point(400).ratio_to_asymptote > summary.point(50).ratio_to_asymptote

    def test_known_variance_comparison(self):
        Ns = [10, 20, 30, 40, 50, 60]
        summary = run_detector_comparison(10, Ns, trials=2000, seed=2008)

        # K = N leaves the eigenvalue ratio undefined, that point counts against it
        at_k = summary.point(10)
        assert math.isnan(at_k.proportion('eig-ratio').proportion)
        assert not math.isnan(at_k.proportion('energy-vote').proportion)

        ratio = [summary.point(N).proportion('eig-ratio').proportion for N in Ns[1:]]
        energy = [summary.point(N).proportion('energy-vote').proportion for N in Ns[1:]]
        wins = sum(r >= e for r, e in zip(ratio, energy))
        assert wins >= 5
        assert sum(ratio) / len(ratio) > sum(energy) / len(energy)

    @pytest.mark.parametrize('N', [40, 50, 60])
    def test_unknown_variance_from_n40(self, N):
        summary = run_detector_comparison(10, [N], known_variance=False, trials=2000, seed=2008)
        assert summary.point(N).proportion('eig-ratio').proportion >= 0.8
