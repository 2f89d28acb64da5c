"""
Monte Carlo experiments over a sweep of sample counts N.

Two kinds of experiment are supported:

* convergence: K = alpha N, a single hypothesis, and the mean of
  lmax / lmin compared with its asymptotic value
* comparison: K fixed, balanced H0 / H1 trials under Rayleigh fading, and the
  proportion of correct decisions of each detector

Every trial draws from its own generator seeded by
(master_seed, N, K, trial_index), so the records, and the summaries computed
from them in trial order, do not depend on how trials are scheduled.
"""
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import math
import logging
from dataclasses import dataclass, field, asdict

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from scipy import stats
from threadpoolctl import threadpool_limits

from .detectors import Detector, detector_classes, make_detector
from .errors import ConfigError, DomainError, SweepError
from .linalg import SOLVERS, eigh, gram
from .rmt import from_db, ratio_threshold, spiked_top_eigenvalue
from .signal import (
    Hypothesis, ScenarioConfig, NOISE_KINDS, SAMPLE_FIELDS, SIGNAL_KINDS,
    synthesize, unit_energy_channel
)
from .util import derive_seed, is_integral, resolve_threads

logger = logging.getLogger(__name__)

KINDS = ('convergence', 'comparison')
SNR_CONVENTIONS = ('total', 'per-sensor')
DEFAULT_TRIALS = 2000
CSV_COLUMNS = [
    'experiment', 'alpha_or_K', 'N', 'detector', 'trials', 'proportion_correct',
    'ci_low', 'ci_high', 'mean_ratio', 'ratio_to_asymptote', 'seed'
]


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    kind: str
    Ns: Tuple[int, ...]
    trials: int = DEFAULT_TRIALS
    master_seed: int = 0
    detectors: Optional[Tuple[str, ...]] = None
    alpha: Optional[float] = None
    hypothesis: Optional[Hypothesis] = None
    K: Optional[int] = None
    known_variance: bool = True
    rho_db: float = -5.0
    snr: Optional[str] = None
    noise_kind: str = 'gaussian'
    signal_kind: str = 'gaussian'
    samples: str = 'complex'
    solver: str = 'lapack'
    detector_params: Optional[Dict[str, Dict[str, Any]]] = field(default=None, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, 'Ns', tuple(int(n) for n in self.Ns))
        if self.hypothesis is not None:
            object.__setattr__(self, 'hypothesis', Hypothesis(self.hypothesis))

        if self.kind not in KINDS:
            raise ConfigError(f'Unknown experiment kind {self.kind!r}, expected one of {KINDS}')
        if self.trials < 1:
            raise ConfigError(f'trials must be >= 1, got {self.trials}')
        if len(self.Ns) == 0:
            raise ConfigError(f'Experiment {self.name} has an empty sweep')
        if not 0 <= self.master_seed < 2 ** 64:
            raise ConfigError(f'seed must be an unsigned 64 bit integer, got {self.master_seed}')
        if self.noise_kind not in NOISE_KINDS:
            raise ConfigError(f'Unknown noise kind {self.noise_kind!r}')
        if self.signal_kind not in SIGNAL_KINDS:
            raise ConfigError(f'Unknown signal kind {self.signal_kind!r}')
        if self.samples not in SAMPLE_FIELDS:
            raise ConfigError(f'Unknown samples {self.samples!r}, expected one of {SAMPLE_FIELDS}')
        if self.solver not in SOLVERS:
            raise ConfigError(f'Unknown solver {self.solver!r}, expected one of {SOLVERS}')

        if self.kind == 'convergence':
            if self.alpha is None or not 0 < self.alpha < 1:
                raise ConfigError(f'convergence needs alpha in (0,1), got {self.alpha}')
            if self.hypothesis is None:
                raise ConfigError('convergence needs a hypothesis, H0 or H1')
        else:
            if self.K is None or self.K < 1:
                raise ConfigError(f'comparison needs K >= 1, got {self.K}')

        if self.snr is None:
            object.__setattr__(self, 'snr', 'total' if self.kind == 'convergence' else 'per-sensor')
        if self.snr not in SNR_CONVENTIONS:
            raise ConfigError(f'Unknown snr convention {self.snr!r}, expected one of {SNR_CONVENTIONS}')

        if self.detectors is None:
            object.__setattr__(self, 'detectors', self.default_detectors())
        object.__setattr__(self, 'detectors', tuple(self.detectors))
        for detector_id in self.detectors:
            if detector_id not in detector_classes:
                raise ConfigError(f'Unknown detector {detector_id!r}')
            needs_variance = detector_classes[detector_id].requires_variance()
            if needs_variance and not self.known_variance:
                raise ConfigError(f'{detector_id} needs the noise variance but'
                                  + ' known_variance is false')
        params = {}
        for detector_id, p in (self.detector_params or {}).items():
            if not isinstance(p, Mapping):
                raise ConfigError(f'detector_params[{detector_id!r}] must be a mapping, got {p!r}')
            params[detector_id] = dict(p)
            if detector_id not in self.detectors:
                raise ConfigError(f'detector_params names {detector_id!r}, which is not one of'
                                  + f' the detectors {list(self.detectors)}')
        object.__setattr__(self, 'detector_params', params)

        # Raises on a bad sweep before anything runs
        self.sweep()

    def default_detectors(self) -> Tuple[str, ...]:
        if self.kind == 'comparison' and self.known_variance:
            return ('eig-ratio', 'energy-vote')
        return ('eig-ratio',)

    def sweep(self) -> List[Tuple[int, int]]:
        """ (K, N) for every point of the sweep """
        points = []
        for N in self.Ns:
            if self.kind == 'convergence':
                K_float = self.alpha * N
                if not is_integral(K_float):
                    raise SweepError(f'alpha * N = {K_float} is not an integer'
                                     + f' for alpha={self.alpha} N={N}')
                K = int(round(K_float))
            else:
                K = int(self.K)

            if K < 1 or K > N:
                raise SweepError(f'Sweep point K={K} N={N} needs 1 <= K <= N')
            points.append((K, N))
        return points

    def noise_variance(self, K: int) -> float:
        """ Noise variance of the trials at K sensors

        'total' sets the SNR over the whole channel, sum |h_i|^2 / sigma2 = rho,
        so sigma2 = 1/rho. 'per-sensor' sets it at each sensor,
        E|h_i|^2 / sigma2 = rho, so sigma2 = 1/(K rho). Convergence runs under
        H0 use unit variance.
        """
        if self.kind == 'convergence' and self.hypothesis is Hypothesis.H0:
            return 1.0
        rho = from_db(self.rho_db)
        if self.snr == 'per-sensor':
            return 1.0 / (K * rho)
        return 1.0 / rho

    def make_detectors(self) -> Dict[str, Detector]:
        return {d: make_detector(d, self.detector_params.get(d)) for d in self.detectors}

    def truth(self, trial_index: int) -> Hypothesis:
        if self.kind == 'convergence':
            return self.hypothesis
        return Hypothesis.H0 if trial_index % 2 == 0 else Hypothesis.H1

    def scenario(self, K: int, N: int, trial_index: int) -> ScenarioConfig:
        truth = self.truth(trial_index)
        fixed_channel = self.kind == 'convergence'
        return ScenarioConfig(
            K=K, N=N, sigma2=self.noise_variance(K), hypothesis=truth,
            noise_kind=self.noise_kind, signal_kind=self.signal_kind,
            samples=self.samples,
            fading='fixed' if fixed_channel else 'rayleigh',
            channel=unit_energy_channel(K) if fixed_channel else None,
            seed=derive_seed(self.master_seed, N, K, trial_index),
        )

    def asymptote(self, K: int, N: int) -> float:
        alpha = K / N
        if alpha >= 1:
            return math.nan
        if self.kind == 'convergence' and self.hypothesis is Hypothesis.H1:
            return spiked_top_eigenvalue(1.0, self.noise_variance(K), alpha).asymptotic_ratio
        return ratio_threshold(alpha)

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d['hypothesis'] = None if self.hypothesis is None else str(self.hypothesis)
        d['Ns'] = list(self.Ns)
        d['detectors'] = list(self.detectors)
        return d


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    truth: Hypothesis
    labels: Dict[str, Optional[Hypothesis]]
    lambda_min: float
    lambda_max: float
    channel_energy: Optional[float] = None

    @property
    def ratio(self) -> float:
        if self.lambda_min > 0:
            return self.lambda_max / self.lambda_min
        return math.inf

    def correct(self, detector_id: str) -> Optional[bool]:
        label = self.labels.get(detector_id)
        if label is None:
            return None
        return label is self.truth


@dataclass(frozen=True)
class ProportionSummary:
    detector: str
    trials: int
    correct: int
    proportion: float
    ci_low: float
    ci_high: float
    sensitivity: float
    specificity: float


@dataclass(frozen=True)
class PointSummary:
    K: int
    N: int
    trials: int
    mean_ratio: float
    ratio_stderr: float
    asymptote: float = math.nan
    proportions: Tuple[ProportionSummary, ...] = ()
    notes: Tuple[str, ...] = ()

    @property
    def alpha(self) -> float:
        return self.K / self.N

    @property
    def ratio_to_asymptote(self) -> float:
        if math.isnan(self.asymptote) or self.asymptote == 0:
            return math.nan
        return self.mean_ratio / self.asymptote

    def proportion(self, detector_id: str) -> ProportionSummary:
        for p in self.proportions:
            if p.detector == detector_id:
                return p
        raise KeyError(detector_id)


@dataclass(frozen=True)
class ExperimentSummary:
    spec: ExperimentSpec
    points: Tuple[PointSummary, ...] = field(default_factory=tuple)

    def point(self, N: int) -> PointSummary:
        for p in self.points:
            if p.N == N:
                return p
        raise KeyError(N)

    @property
    def notes(self) -> List[str]:
        return [note for p in self.points for note in p.notes]

    def to_frame(self) -> pd.DataFrame:
        """ One row per (sweep point, detector) with the CSV_COLUMNS """
        spec = self.spec
        rows = []
        for point in self.points:
            alpha_or_K = spec.alpha if spec.kind == 'convergence' else point.K
            for p in point.proportions:
                rows.append({
                    'experiment': spec.name,
                    'alpha_or_K': alpha_or_K,
                    'N': point.N,
                    'detector': p.detector,
                    'trials': point.trials,
                    'proportion_correct': p.proportion,
                    'ci_low': p.ci_low,
                    'ci_high': p.ci_high,
                    'mean_ratio': point.mean_ratio,
                    'ratio_to_asymptote': point.ratio_to_asymptote,
                    'seed': spec.master_seed,
                })
        return pd.DataFrame(rows, columns=CSV_COLUMNS)


def wilson_interval(successes: int, n: int, confidence: float = 0.95) -> Tuple[float, float]:
    """ Wilson score interval for a binomial proportion

    A single observation carries no spread information and gets [0, 1].
    """
    if n < 1:
        raise DomainError(f'wilson_interval needs n >= 1, got {n=}')
    if not 0 <= successes <= n:
        raise DomainError(f'successes must be in [0, n], got {successes=} {n=}')
    if n == 1:
        return 0.0, 1.0

    p = successes / n
    z = float(stats.norm.ppf(0.5 + confidence / 2))
    z2 = z * z
    denom = 1 + z2 / n
    center = (p + z2 / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom
    low = max(0.0, min(center - half, p))
    high = min(1.0, max(center + half, p))
    return low, high


def _proportion(detector_id: str, records: Sequence[TrialRecord]) -> ProportionSummary:
    outcomes = [(r.truth, r.correct(detector_id)) for r in records]
    outcomes = [(truth, ok) for truth, ok in outcomes if ok is not None]
    n = len(outcomes)
    if n == 0:
        nan = math.nan
        return ProportionSummary(detector_id, 0, 0, nan, nan, nan, nan, nan)

    def rate(hypothesis: Hypothesis) -> float:
        hits = [ok for truth, ok in outcomes if truth is hypothesis]
        return sum(hits) / len(hits) if hits else math.nan

    correct = sum(1 for _, ok in outcomes if ok)
    low, high = wilson_interval(correct, n)
    return ProportionSummary(
        detector=detector_id, trials=n, correct=correct, proportion=correct / n,
        ci_low=low, ci_high=high,
        sensitivity=rate(Hypothesis.H1), specificity=rate(Hypothesis.H0),
    )


def summarize(
    records: Sequence[TrialRecord],
    asymptote: float = math.nan,
    notes: Iterable[str] = (),
    K: Optional[int] = None,
    N: Optional[int] = None,
) -> PointSummary:
    """ Means, standard errors and Wilson intervals over one sweep point """
    if len(records) == 0:
        raise DomainError('summarize needs at least one trial record')

    records = sorted(records, key=lambda r: r.trial_index)
    ratios = np.array([r.ratio for r in records], dtype=float)
    finite = ratios[np.isfinite(ratios)]
    mean_ratio = float(np.mean(finite)) if finite.size else math.nan
    stderr = float(np.std(finite, ddof=1) / math.sqrt(finite.size)) if finite.size > 1 else math.nan

    detector_ids: List[str] = []
    for r in records:
        for detector_id in r.labels:
            if detector_id not in detector_ids:
                detector_ids.append(detector_id)

    return PointSummary(
        K=K if K is not None else -1, N=N if N is not None else -1,
        trials=len(records), mean_ratio=mean_ratio, ratio_stderr=stderr,
        asymptote=asymptote,
        proportions=tuple(_proportion(d, records) for d in detector_ids),
        notes=tuple(notes),
    )


def run_trial(
    spec: ExperimentSpec,
    K: int,
    N: int,
    trial_index: int,
    detectors: Optional[Dict[str, Detector]] = None,
) -> TrialRecord:
    """ One seeded draw, labelled by every detector of the spec

    The spectrum is computed once with the spec's solver and shared by the
    eigenvalue detectors.
    """
    if detectors is None:
        detectors = spec.make_detectors()
    config = spec.scenario(K, N, trial_index)
    obs = synthesize(config)
    spectrum = eigh(gram(obs.Y), solver=spec.solver)

    labels = {}
    for detector_id, detector in detectors.items():
        if detector.supports(K, N):
            labels[detector_id] = detector.decide(obs, config.sigma2, spectrum=spectrum).label
        else:
            labels[detector_id] = None

    return TrialRecord(
        trial_index=trial_index,
        truth=config.hypothesis,
        labels=labels,
        lambda_min=spectrum.lambda_min,
        lambda_max=spectrum.lambda_max,
        channel_energy=obs.channel.channel_energy if obs.channel is not None else None,
    )


def _run_trials(
    spec: ExperimentSpec,
    K: int,
    N: int,
    indices: Sequence[int]
) -> List[TrialRecord]:
    detectors = spec.make_detectors()
    # One BLAS thread per worker keeps results independent of the pool size
    with threadpool_limits(limits=1):
        return [run_trial(spec, K, N, int(i), detectors) for i in indices]


def run_point(
    spec: ExperimentSpec,
    K: int,
    N: int,
    n_jobs: int = 1,
) -> List[TrialRecord]:
    indices = np.arange(spec.trials)
    if n_jobs <= 1 or spec.trials == 1:
        records = _run_trials(spec, K, N, indices)
    else:
        chunks = [c for c in np.array_split(indices, n_jobs * 4) if len(c)]
        batches = Parallel(n_jobs=n_jobs)(
            delayed(_run_trials)(spec, K, N, chunk.tolist()) for chunk in chunks
        )
        records = [record for batch in batches for record in batch]

    return sorted(records, key=lambda r: r.trial_index)


def _point_notes(spec: ExperimentSpec, K: int, N: int) -> List[str]:
    notes = []
    alpha = K / N
    if spec.kind == 'convergence' and spec.hypothesis is Hypothesis.H1:
        model = spiked_top_eigenvalue(1.0, spec.noise_variance(K), alpha)
        if not model.detectable:
            notes.append(f'N={N}: rho={model.rho:.6g} <= sqrt(alpha)={math.sqrt(alpha):.6g},'
                         + " b'/a asymptote used outside its detectability condition")
    for detector_id in spec.detectors:
        if not detector_classes[detector_id].supports(K, N):
            notes.append(f'N={N}: {detector_id} not applicable at K={K}, alpha={alpha:.6g}')
    return notes


def run_experiment(spec: ExperimentSpec, threads: Optional[int] = None) -> ExperimentSummary:
    n_jobs = resolve_threads(threads)
    points = []
    for K, N in spec.sweep():
        logger.info(f'{spec.name}: K={K} N={N} trials={spec.trials} {n_jobs=}')
        notes = _point_notes(spec, K, N)
        for note in notes:
            logger.warning(f'{spec.name}: {note}')

        records = run_point(spec, K, N, n_jobs)
        points.append(summarize(records, spec.asymptote(K, N), notes, K=K, N=N))

    return ExperimentSummary(spec, tuple(points))


def run_ratio_convergence(
    alpha: float,
    Ns: Sequence[int],
    hypothesis: Hypothesis,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    rho_db: float = -5.0,
    noise_kind: str = 'gaussian',
    samples: str = 'complex',
    solver: str = 'lapack',
    threads: Optional[int] = None,
    name: Optional[str] = None,
) -> ExperimentSummary:
    """ Mean lmax / lmin against its asymptote for K = alpha N

    H1 trials use a fixed channel with sum |h_i|^2 = 1 and sigma2 = 1/rho.
    Finite size ratios sit closer to the asymptote with samples='real'.
    """
    spec = ExperimentSpec(
        name=name or f'convergence-{hypothesis}-alpha{alpha:g}',
        kind='convergence', Ns=tuple(Ns), trials=trials, master_seed=seed,
        alpha=alpha, hypothesis=hypothesis, rho_db=rho_db,
        noise_kind=noise_kind, samples=samples, solver=solver,
    )
    return run_experiment(spec, threads)


def run_detector_comparison(
    K: int,
    Ns: Sequence[int],
    rho_db: float = -5.0,
    known_variance: bool = True,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    snr: str = 'per-sensor',
    solver: str = 'lapack',
    detector_params: Optional[Dict[str, Dict[str, Any]]] = None,
    threads: Optional[int] = None,
    name: Optional[str] = None,
) -> ExperimentSummary:
    """ Proportion of correct detections with balanced H0 / H1 truth

    H1 trials see Rayleigh fading with E|h_i|^2 = 1/K. With the default
    snr='per-sensor' the noise variance is 1/(K rho). The energy vote uses
    V_T = sigma2 and only runs when the variance is known.
    """
    spec = ExperimentSpec(
        name=name or f'comparison-K{K}',
        kind='comparison', Ns=tuple(Ns), trials=trials, master_seed=seed,
        K=K, known_variance=known_variance, rho_db=rho_db, snr=snr, solver=solver,
        detector_params=detector_params,
    )
    return run_experiment(spec, threads)
