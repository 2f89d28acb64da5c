from typing import Optional, Union, Callable, IO

import os
import math
import tempfile

import numpy as np

from .errors import ConfigError

THREADS_ENV = 'EIGENSENSE_THREADS'

Number = Union[int, float]


def derive_seed(master_seed: int, *keys: int) -> int:
    """ Derives an independent 64 bit seed from a master seed and keys.

    The same (master_seed, *keys) always gives the same seed, so trials can be
    generated in any order or in parallel.
    """
    sequence = np.random.SeedSequence([int(master_seed), *(int(k) for k in keys)])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    """ Counter-based generator (Philox) seeded from a 64 bit seed """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


def fmt(value: Optional[Number], digits: int = 9) -> str:
    """ Locale independent decimal text with `digits` significant digits """
    if value is None:
        return 'nan'
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return 'nan'
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return format(value, f'.{digits}g')


def resolve_threads(requested: Optional[int] = None) -> int:
    """ Number of worker processes for trial execution.

    Precedence is the explicit request, then the EIGENSENSE_THREADS variable,
    then 1. A value of 0 means one worker per core.
    """
    if requested is None:
        env = os.environ.get(THREADS_ENV, '').strip()
        if env:
            try:
                requested = int(env)
            except ValueError:
                raise ConfigError(f'{THREADS_ENV} must be an integer, got {env!r}')
        else:
            requested = 1

    if requested < 0:
        raise ConfigError(f'threads must be >= 0, got {requested}')
    if requested == 0:
        return os.cpu_count() or 1
    return requested


def atomic_write(path: str, write: Callable[[IO[str]], None]) -> None:
    """ Writes through `write` to a temp file then renames it over `path` """
    path = os.path.abspath(path)
    directory = os.path.dirname(path)
    os.makedirs(directory, exist_ok=True)

    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix='.tmp_',
                                    suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, 'w', newline='') as f:
            write(f)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def is_integral(value: float, tol: float = 1e-9) -> bool:
    return abs(value - round(value)) <= tol * max(1.0, abs(value))
