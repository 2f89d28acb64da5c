"""
Run configuration: a JSON file with a list of experiments, validated in full
before anything is computed. Unknown keys are errors at every level.

    {
      "id": "paper_presets",
      "path": "./results/paper_presets",
      "seed": 2008,
      "threads": 0,
      "experiments": [
        {"name": "paper-fig4", "kind": "convergence", "alpha": 0.5,
         "hypothesis": "H0", "Ns": [50, 100, 200, 400], "trials": 2000}
      ]
    }
"""
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

import os
import json
from dataclasses import dataclass, replace

from .errors import ConfigError
from .montecarlo import ExperimentSpec

TOP_LEVEL_KEYS = {'id', 'path', 'seed', 'threads', 'experiments'}
REQUIRED_TOP_LEVEL = {'id', 'path', 'experiments'}

EXPERIMENT_KEYS = {
    'name', 'kind', 'Ns', 'trials', 'seed', 'detectors', 'alpha', 'hypothesis',
    'K', 'known_variance', 'rho_db', 'snr', 'noise_kind', 'signal_kind', 'samples',
    'solver', 'detector_params', 'dat'
}
REQUIRED_EXPERIMENT = {'name', 'kind', 'Ns'}

# Config keys that are named differently on ExperimentSpec
_SPEC_NAMES = {'seed': 'master_seed'}


def _check_keys(d: Mapping[str, Any], allowed: set, required: set, where: str) -> None:
    if not isinstance(d, Mapping):
        raise ConfigError(f'{where} must be an object, got {type(d).__name__}')
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f'Unknown keys in {where}: {sorted(unknown)}')
    missing = required - set(d)
    if missing:
        raise ConfigError(f'Missing keys in {where}: {sorted(missing)}')


def _check_int(value: Any, where: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigError(f'{where} must be an integer >= {minimum}, got {value!r}')
    return value


def experiment_spec(experiment: Mapping[str, Any], default_seed: int) -> ExperimentSpec:
    params = {
        _SPEC_NAMES.get(k, k): v for k, v in experiment.items() if k != 'dat'
    }
    params.setdefault('master_seed', default_seed)
    if 'detectors' in params and params['detectors'] is not None:
        params['detectors'] = tuple(params['detectors'])
    try:
        return ExperimentSpec(**params)
    except TypeError as e:
        raise ConfigError(f'Invalid experiment {experiment.get("name")!r}: {e}')


@dataclass(frozen=True)
class RunConfig:
    id: str
    path: str
    seed: int
    threads: Optional[int]
    experiments: Tuple[Dict[str, Any], ...]

    def __post_init__(self) -> None:
        _check_int(self.seed, 'seed')
        if self.threads is not None:
            _check_int(self.threads, 'threads')

        names = set()
        for i, experiment in enumerate(self.experiments):
            _check_keys(experiment, EXPERIMENT_KEYS, REQUIRED_EXPERIMENT,
                        f'experiments[{i}]')
            name = experiment['name']
            if name in names:
                raise ConfigError(f'Duplicate experiment name {name!r}')
            names.add(name)
            if 'seed' in experiment:
                _check_int(experiment['seed'], f'{name}.seed')
            if 'trials' in experiment:
                _check_int(experiment['trials'], f'{name}.trials', minimum=1)
            if not isinstance(experiment.get('dat', False), bool):
                raise ConfigError(f'{name}.dat must be true or false')
            # Building the spec validates the remaining values and the sweep
            experiment_spec(experiment, self.seed)

    @classmethod
    def from_dict(cls, cfg: Mapping[str, Any]) -> 'RunConfig':
        _check_keys(cfg, TOP_LEVEL_KEYS, REQUIRED_TOP_LEVEL, 'config')
        experiments = cfg['experiments']
        if not isinstance(experiments, list) or len(experiments) == 0:
            raise ConfigError('experiments must be a non-empty list')

        return cls(
            id=str(cfg['id']),
            path=str(cfg['path']),
            seed=cfg.get('seed', 0),
            threads=cfg.get('threads'),
            experiments=tuple(dict(e) if isinstance(e, Mapping) else e
                              for e in experiments),
        )

    @classmethod
    def from_file(cls, config_path: str) -> 'RunConfig':
        config_path = os.path.abspath(config_path)
        try:
            with open(config_path, 'r') as f:
                cfg = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f'{config_path} is not valid JSON: {e}')
        return cls.from_dict(cfg)

    def with_overrides(
        self,
        trials: Optional[int] = None,
        seed: Optional[int] = None,
        threads: Optional[int] = None,
        path: Optional[str] = None,
        presets: Optional[Iterable[str]] = None,
    ) -> 'RunConfig':
        """ Command line overrides, a seed override replaces every experiment seed """
        experiments: List[Dict[str, Any]] = [dict(e) for e in self.experiments]

        if presets:
            wanted = list(presets)
            known = {e['name'] for e in experiments}
            missing = [p for p in wanted if p not in known]
            if missing:
                raise ConfigError(f'Unknown presets {missing}, available: {sorted(known)}')
            experiments = [e for e in experiments if e['name'] in wanted]

        for experiment in experiments:
            if trials is not None:
                experiment['trials'] = trials
            if seed is not None:
                experiment.pop('seed', None)

        return replace(
            self,
            seed=self.seed if seed is None else seed,
            threads=self.threads if threads is None else threads,
            path=self.path if path is None else path,
            experiments=tuple(experiments),
        )

    def spec(self, name: str) -> ExperimentSpec:
        for experiment in self.experiments:
            if experiment['name'] == name:
                return experiment_spec(experiment, self.seed)
        raise ConfigError(f'No experiment named {name!r}')

    def specs(self) -> List[ExperimentSpec]:
        return [experiment_spec(e, self.seed) for e in self.experiments]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'id': self.id,
            'path': self.path,
            'seed': self.seed,
            'threads': self.threads,
            'experiments': [dict(e) for e in self.experiments],
        }
