"""
Seedable synthesis of K x N observation matrices under H0 (noise only) and
H1 (one primary signal seen through a channel held fixed over the block).

Samples are complex by default, with the noise variance sigma2 split evenly
between real and imaginary parts. With samples='real' every draw is real
valued and sigma2 is the variance of each real noise sample.
"""
from typing import Any, Dict, Optional, Tuple, Mapping

import json
import hashlib
from enum import Enum
from dataclasses import dataclass, field, asdict

import numpy as np

from .errors import ConfigError
from .util import make_rng


class Hypothesis(str, Enum):
    H0 = 'H0'
    H1 = 'H1'

    def __str__(self) -> str:
        return self.value


NOISE_KINDS = ('gaussian', 'uniform', 'laplace')
SIGNAL_KINDS = ('gaussian', 'qpsk')
FADING_KINDS = ('rayleigh', 'fixed')
SAMPLE_FIELDS = ('complex', 'real')


def gaussian_pair(
    rng: np.random.Generator,
    sigma2: float = 1.0,
    size: Any = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """ Real and imaginary parts of circular complex Gaussian draws whose
    complex variance is sigma2 """
    scale = np.sqrt(sigma2 / 2)
    return rng.standard_normal(size) * scale, rng.standard_normal(size) * scale


def uniform_sym(
    rng: np.random.Generator,
    variance: float = 1.0,
    size: Any = None,
) -> np.ndarray:
    """ Zero mean uniform draws on [-sqrt(3 variance), sqrt(3 variance)] """
    half_width = np.sqrt(3 * variance)
    return rng.uniform(-half_width, half_width, size)


def laplace_sym(
    rng: np.random.Generator,
    variance: float = 1.0,
    size: Any = None,
) -> np.ndarray:
    """ Zero mean Laplace draws, scale sqrt(variance / 2) """
    return rng.laplace(0.0, np.sqrt(variance / 2), size)


def complex_noise(
    rng: np.random.Generator,
    kind: str,
    sigma2: float,
    shape: Tuple[int, ...],
) -> np.ndarray:
    """ Complex noise of total variance sigma2 from one of NOISE_KINDS """
    if kind == 'gaussian':
        re, im = gaussian_pair(rng, sigma2, shape)
    elif kind == 'uniform':
        re, im = uniform_sym(rng, sigma2 / 2, shape), uniform_sym(rng, sigma2 / 2, shape)
    elif kind == 'laplace':
        re, im = laplace_sym(rng, sigma2 / 2, shape), laplace_sym(rng, sigma2 / 2, shape)
    else:
        raise ConfigError(f'Unknown noise kind {kind!r}, expected one of {NOISE_KINDS}')
    return re + 1j * im


def real_noise(
    rng: np.random.Generator,
    kind: str,
    sigma2: float,
    shape: Tuple[int, ...],
) -> np.ndarray:
    """ Real noise of variance sigma2 from one of NOISE_KINDS """
    if kind == 'gaussian':
        return rng.standard_normal(shape) * np.sqrt(sigma2)
    if kind == 'uniform':
        return uniform_sym(rng, sigma2, shape)
    if kind == 'laplace':
        return laplace_sym(rng, sigma2, shape)
    raise ConfigError(f'Unknown noise kind {kind!r}, expected one of {NOISE_KINDS}')


def primary_signal(
    rng: np.random.Generator,
    kind: str,
    N: int,
    samples: str = 'complex',
) -> np.ndarray:
    """ N unit variance samples s(k) of the primary transmitter

    Real 'qpsk' degenerates to BPSK.
    """
    if samples == 'real':
        if kind == 'gaussian':
            return rng.standard_normal(N)
        if kind == 'qpsk':
            return 2.0 * rng.integers(0, 2, size=N) - 1
    elif kind == 'gaussian':
        re, im = gaussian_pair(rng, 1.0, N)
        return re + 1j * im
    elif kind == 'qpsk':
        bits = rng.integers(0, 2, size=(2, N))
        return ((2 * bits[0] - 1) + 1j * (2 * bits[1] - 1)) / np.sqrt(2)
    raise ConfigError(f'Unknown signal kind {kind!r}, expected one of {SIGNAL_KINDS}')


@dataclass(frozen=True)
class ChannelRealization:
    h: Tuple[complex, ...]

    def __post_init__(self) -> None:
        if len(self.h) < 1:
            raise ConfigError('A channel needs at least one gain')

    @property
    def K(self) -> int:
        return len(self.h)

    @property
    def channel_energy(self) -> float:
        return float(np.sum(np.abs(np.asarray(self.h)) ** 2))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.h, dtype=np.complex128)


def unit_energy_channel(K: int) -> Tuple[complex, ...]:
    """ Equal gains 1/sqrt(K), so that sum |h_i|^2 = 1 """
    return tuple(complex(1 / np.sqrt(K)) for _ in range(K))


def draw_channel(
    K: int,
    fading: str,
    rng: np.random.Generator,
    fixed: Optional[Tuple[complex, ...]] = None,
    samples: str = 'complex',
) -> ChannelRealization:
    """ One channel realization for K sensors

    'rayleigh' draws circular Gaussian gains with E|h_i|^2 = 1/K (real
    Gaussian gains for real samples), 'fixed' returns `fixed` verbatim.
    """
    if K < 1:
        raise ConfigError(f'K must be >= 1, got {K=}')

    if fading == 'rayleigh':
        if samples == 'real':
            gains = rng.standard_normal(K) * np.sqrt(1.0 / K)
        else:
            re, im = gaussian_pair(rng, 1.0 / K, K)
            gains = re + 1j * im
        return ChannelRealization(tuple(complex(z) for z in gains))

    if fading == 'fixed':
        if fixed is None or len(fixed) != K:
            raise ConfigError(f'fixed fading needs exactly {K} gains, got {fixed}')
        return ChannelRealization(tuple(complex(z) for z in fixed))

    raise ConfigError(f'Unknown fading {fading!r}, expected one of {FADING_KINDS}')


@dataclass(frozen=True)
class ScenarioConfig:
    K: int
    N: int
    sigma2: float
    hypothesis: Hypothesis = Hypothesis.H0
    noise_kind: str = 'gaussian'
    signal_kind: str = 'gaussian'
    fading: str = 'rayleigh'
    channel: Optional[Tuple[complex, ...]] = None
    seed: int = 0
    samples: str = 'complex'

    def __post_init__(self) -> None:
        # Coerce strings coming from JSON
        object.__setattr__(self, 'hypothesis', Hypothesis(self.hypothesis))
        if self.channel is not None:
            object.__setattr__(self, 'channel', tuple(complex(z) for z in self.channel))

        if self.K < 1 or self.N < 1:
            raise ConfigError(f'K and N must be >= 1, got K={self.K} N={self.N}')
        if self.K > self.N:
            raise ConfigError(f'K must not exceed N (alpha = K/N <= 1), got K={self.K} N={self.N}')
        if not self.sigma2 > 0:
            raise ConfigError(f'sigma2 must be > 0, got {self.sigma2}')
        if self.noise_kind not in NOISE_KINDS:
            raise ConfigError(f'Unknown noise kind {self.noise_kind!r}')
        if self.signal_kind not in SIGNAL_KINDS:
            raise ConfigError(f'Unknown signal kind {self.signal_kind!r}')
        if self.fading not in FADING_KINDS:
            raise ConfigError(f'Unknown fading {self.fading!r}')
        if self.samples not in SAMPLE_FIELDS:
            raise ConfigError(f'Unknown samples {self.samples!r}, expected one of {SAMPLE_FIELDS}')
        if self.fading == 'fixed' and (self.channel is None or len(self.channel) != self.K):
            raise ConfigError(f'fixed fading needs a channel of length {self.K}')
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f'seed must be an unsigned 64 bit integer, got {self.seed}')

    @property
    def alpha(self) -> float:
        return self.K / self.N

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d['hypothesis'] = str(self.hypothesis)
        if self.channel is not None:
            d['channel'] = [[z.real, z.imag] for z in self.channel]
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> 'ScenarioConfig':
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f'Unknown scenario keys {sorted(unknown)}')
        params = dict(d)
        if params.get('channel') is not None:
            params['channel'] = tuple(
                complex(*z) if isinstance(z, (list, tuple)) else complex(z)
                for z in params['channel']
            )
        return cls(**params)

    def digest(self) -> str:
        text = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(text.encode('utf-8')).hexdigest()[:16]


@dataclass(frozen=True, eq=False)
class ObservationMatrix:
    Y: np.ndarray = field(repr=False)
    truth: Optional[Hypothesis] = None
    channel: Optional[ChannelRealization] = None
    config_digest: Optional[str] = None

    @property
    def K(self) -> int:
        return self.Y.shape[0]

    @property
    def N(self) -> int:
        return self.Y.shape[1]

    @property
    def alpha(self) -> float:
        return self.K / self.N

    def scaled(self, c: float) -> 'ObservationMatrix':
        return ObservationMatrix(self.Y * c, self.truth, self.channel, self.config_digest)


def synthesize(config: ScenarioConfig) -> ObservationMatrix:
    """ Draws one observation matrix from a scenario.

    The draw order is channel, then signal, then noise, all from a single
    generator seeded with config.seed.
    """
    rng = make_rng(config.seed)
    K, N = config.K, config.N

    channel = None
    if config.hypothesis is Hypothesis.H1:
        channel = draw_channel(K, config.fading, rng, fixed=config.channel,
                               samples=config.samples)
        s = primary_signal(rng, config.signal_kind, N, samples=config.samples)
        Y = np.outer(channel.as_array(), s)
    else:
        Y = np.zeros((K, N), dtype=np.complex128)

    if config.samples == 'real':
        noise = real_noise(rng, config.noise_kind, config.sigma2, (K, N))
    else:
        noise = complex_noise(rng, config.noise_kind, config.sigma2, (K, N))
    Y = Y + noise
    return ObservationMatrix(Y, config.hypothesis, channel, config.digest())

