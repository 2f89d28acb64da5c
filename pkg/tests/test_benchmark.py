import os
import json

import pandas as pd
import pytest

from eigensense import Benchmark
from eigensense.config import RunConfig
from eigensense.jobs import ComparisonJob, ConvergenceJob, job_types
from eigensense.montecarlo import CSV_COLUMNS


@pytest.fixture
def config(tmp_path):
    return RunConfig.from_dict({
        'id': 'small',
        'path': str(tmp_path / 'small'),
        'seed': 3,
        'threads': 1,
        'experiments': [
            {'name': 'h0', 'kind': 'convergence', 'alpha': 0.5, 'hypothesis': 'H0',
             'Ns': [10, 20], 'trials': 6, 'dat': True},
            {'name': 'cmp', 'kind': 'comparison', 'K': 4, 'Ns': [4, 8], 'trials': 6,
             'dat': True},
        ],
    })


class TestJobs:

    def test_registry(self):
        assert job_types == {'convergence': ConvergenceJob, 'comparison': ComparisonJob}

    def test_kind_mismatch(self, config, tmp_path):
        with pytest.raises(ValueError):
            ComparisonJob.from_config(config.experiments[0], str(tmp_path / 'x'))

    def test_lifecycle(self, config, tmp_path):
        job = ConvergenceJob.from_config(config.experiments[0], str(tmp_path / 'h0'),
                                        default_seed=config.seed)
        assert not job.complete()
        assert job.ready()

        job.run(threads=1)
        assert job.complete()
        assert os.path.exists(job.config_path)
        assert os.path.exists(job.dat_path)

        with open(job.manifest_path) as f:
            manifest = json.load(f)
        assert manifest['seed'] == 3
        assert manifest['experiment']['name'] == 'h0'
        assert 'version' in manifest

        job.reset()
        assert not job.complete()
        assert not os.path.exists(job.basedir)


class TestBenchmark:

    def test_jobs_and_filter(self, config):
        benchmark = Benchmark(config)
        assert [job.name() for job in benchmark.jobs()] == ['h0', 'cmp']
        assert [job.name() for job in benchmark.jobs('comparison')] == ['cmp']
        assert [job.name() for job in benchmark.jobs('h0')] == ['h0']

    def test_status(self, config):
        benchmark = Benchmark(config)
        status = benchmark.status()
        assert status['complete'] == []
        assert len(status['ready']) == 2

    def test_run_collects_all_rows(self, config):
        benchmark = Benchmark(config)
        path = benchmark.run()
        results = pd.read_csv(path)
        assert list(results.columns) == CSV_COLUMNS
        # 2 convergence points, then 2 comparison points with 2 detectors each
        assert len(results) == 2 + 4
        assert set(results['experiment']) == {'h0', 'cmp'}
        assert len(benchmark.status()['complete']) == 2

        with open(benchmark.manifest_path) as f:
            manifest = json.load(f)
        assert manifest['seed'] == 3
        assert any('not applicable' in note for note in manifest['notes']['cmp'])

    def test_rerun_skips_complete(self, config, capsys):
        benchmark = Benchmark(config)
        benchmark.run()
        capsys.readouterr()

        benchmark.run()
        out = capsys.readouterr().out
        assert 'running' not in out
        assert 'skipping h0' in out

    def test_force_reruns_identically(self, config):
        benchmark = Benchmark(config)
        with open(benchmark.run()) as f:
            first = f.read()
        with open(benchmark.run(force=True)) as f:
            assert f.read() == first
