from typing import Any, Dict, Mapping, Optional, Type, TypeVar
from abc import ABC, abstractmethod

import os
import json
import logging
from shutil import rmtree

import pandas as pd

from .. import __version__
from ..config import experiment_spec
from ..custom_json_encoder import CustomEncoder
from ..errors import ConfigError
from ..matrix_io import write_csv, write_dat, write_json
from ..montecarlo import ExperimentSpec, ExperimentSummary, run_experiment

T = TypeVar('T', bound='ExperimentJob')

logger = logging.getLogger(__name__)


class ExperimentJob(ABC):
    """ One experiment of a run, with its own directory of outputs

        <basedir>/config.json          the experiment as configured
        <basedir>/results.csv          one row per (N, detector)
        <basedir>/results.dat          same data for gnuplot, if `dat`
        <basedir>/manifest.json        spec echo, seed, version and notes
    """

    def __init__(self, spec: ExperimentSpec, basedir: str, dat: bool = False) -> None:
        if spec.kind != self.kind():
            raise ConfigError(f'Can not construct {self.__class__.__name__}'
                              + f' with {spec.kind}')
        self.spec = spec
        self.basedir = basedir
        self.dat = dat

    @classmethod
    @abstractmethod
    def kind(cls) -> str:
        raise NotImplementedError

    def name(self) -> str:
        return self.spec.name

    @property
    def config_path(self) -> str:
        return os.path.join(self.basedir, 'config.json')

    @property
    def results_path(self) -> str:
        return os.path.join(self.basedir, 'results.csv')

    @property
    def dat_path(self) -> str:
        return os.path.join(self.basedir, 'results.dat')

    @property
    def manifest_path(self) -> str:
        return os.path.join(self.basedir, 'manifest.json')

    def ready(self) -> bool:
        return not self.complete()

    def complete(self) -> bool:
        return os.path.exists(self.results_path) and os.path.exists(self.manifest_path)

    def setup(self) -> None:
        os.makedirs(self.basedir, exist_ok=True)
        with open(self.config_path, 'w') as f:
            json.dump(self.config(), f, cls=CustomEncoder, indent=2)

    def reset(self) -> None:
        if os.path.exists(self.basedir):
            rmtree(self.basedir)

    def config(self) -> Dict[str, Any]:
        return {**self.spec.to_dict(), 'dat': self.dat}

    def results_frame(self) -> pd.DataFrame:
        if not self.complete():
            raise RuntimeError(f'{self.name()} has not been run yet')
        # Seeds go up to 2**64 - 1, kept as text so they survive a read back
        return pd.read_csv(self.results_path, dtype={'seed': str})

    def run(self, threads: Optional[int] = None) -> ExperimentSummary:
        self.setup()
        summary = run_experiment(self.spec, threads)

        write_csv(self.results_path, summary.to_frame())
        if self.dat:
            write_dat(self.dat_path, self.dat_frame(summary))

        # The manifest goes last, it marks the job as complete
        write_json(self.manifest_path, {
            'experiment': self.config(),
            'seed': self.spec.master_seed,
            'version': __version__,
            'notes': summary.notes,
            'points': [
                {'K': p.K, 'N': p.N, 'mean_ratio': p.mean_ratio,
                 'ratio_stderr': p.ratio_stderr, 'asymptote': p.asymptote}
                for p in summary.points
            ],
        })
        logger.info(f'{self.name()}: wrote {self.results_path}')
        return summary

    @abstractmethod
    def dat_frame(self, summary: ExperimentSummary) -> pd.DataFrame:
        raise NotImplementedError

    @classmethod
    def from_config(
        cls: Type[T],
        cfg: Mapping[str, Any],
        basedir: str,
        default_seed: int = 0,
    ) -> T:
        if cfg.get('kind') != cls.kind():
            raise ConfigError(f'Config object not a {cls.kind()}\n{cfg=}')
        return cls(experiment_spec(cfg, default_seed), basedir, dat=cfg.get('dat', False))

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}({self.name()!r}, {self.basedir!r})'
