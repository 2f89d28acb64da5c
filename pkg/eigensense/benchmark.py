"""
Manages experiment jobs given a run config to work from
"""
from typing import Dict, Iterable, List, Optional, Union

import os
import json
import logging

import pandas as pd

from . import __version__
from .config import RunConfig
from .jobs import job_types, ExperimentJob
from .matrix_io import write_csv, write_json
from .montecarlo import CSV_COLUMNS
from .util import resolve_threads

logger = logging.getLogger(__name__)


class Benchmark:

    def __init__(self, config: Union[str, RunConfig]):
        if not isinstance(config, RunConfig):
            config = RunConfig.from_file(config)

        self.cfg = config
        self.id = config.id
        self.seed = config.seed
        self.threads = config.threads
        self.benchmark_path = os.path.abspath(config.path)

        self._jobs: Dict[str, ExperimentJob] = {}
        for experiment in config.experiments:
            name = experiment['name']
            basedir = os.path.join(self.benchmark_path, name)
            job_class = job_types[experiment['kind']]
            self._jobs[name] = job_class.from_config(experiment, basedir,
                                                     default_seed=self.seed)

    @property
    def results_path(self) -> str:
        return os.path.join(self.benchmark_path, f'{self.id}.csv')

    @property
    def manifest_path(self) -> str:
        return os.path.join(self.benchmark_path, f'{self.id}.manifest.json')

    def jobs(self, filter_by: Optional[str] = None) -> List[ExperimentJob]:
        jobs = list(self._jobs.values())
        if filter_by:
            jobs = [
                job for job in jobs
                if job.kind() == filter_by or job.name() == filter_by
            ]
        return jobs

    def job(self, name: str) -> ExperimentJob:
        return self._jobs[name]

    def status(
        self,
        jobs: Optional[Iterable[ExperimentJob]] = None
    ) -> Dict[str, List[ExperimentJob]]:
        if jobs is None:
            jobs = self.jobs()
        jobs = list(jobs)

        return {
            'complete': [job for job in jobs if job.complete()],
            'ready': [job for job in jobs if job.ready()],
        }

    def run(
        self,
        jobs: Optional[Union[ExperimentJob, Iterable[ExperimentJob]]] = None,
        force: bool = False,
        threads: Optional[int] = None,
    ) -> str:
        """ Runs every job not yet complete, then collects all results into
        one CSV and a run manifest. Returns the CSV path. """
        if jobs is None:  # Collect all jobs if none specified
            jobs = self.jobs()

        elif isinstance(jobs, ExperimentJob):  # If only single job passed
            jobs = [jobs]

        jobs = list(jobs)
        n_jobs = resolve_threads(threads if threads is not None else self.threads)

        for job in jobs:
            if job.complete() and not force:
                print(f'skipping {job.name()}, already complete')
                continue

            job.reset()
            print(f'running {job.name()}')
            job.run(n_jobs)

        self.collect(jobs)
        print('Finished')
        return self.results_path

    def collect(self, jobs: Optional[Iterable[ExperimentJob]] = None) -> pd.DataFrame:
        """ Concatenates the results of complete jobs in config order """
        if jobs is None:
            jobs = self.jobs()
        jobs = [job for job in jobs if job.complete()]

        frames = [job.results_frame() for job in jobs]
        results = (pd.concat(frames, ignore_index=True) if frames
                   else pd.DataFrame(columns=CSV_COLUMNS))

        notes = {}
        for job in jobs:
            with open(job.manifest_path, 'r') as f:
                notes[job.name()] = json.load(f).get('notes', [])

        write_csv(self.results_path, results)
        write_json(self.manifest_path, {
            'id': self.id,
            'seed': self.seed,
            'version': __version__,
            'experiments': [job.config() for job in jobs],
            'notes': notes,
        })
        logger.info(f'{self.id}: {len(results)} rows written to {self.results_path}')
        return results
