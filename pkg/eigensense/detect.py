"""
Decision rules for spectrum occupancy.

* support_test: every eigenvalue inside the MP support [a, b] (sigma2 known)
* ratio_test: lmax / lmin against the H0 limit of the ratio (blind)
* energy_test: average power of one sensor against a threshold V_T
* vote: majority fusion of per-sensor decisions, ties decide H1

H1 fires on equality for energy_test (E|y|^2 >= V_T) and H0 holds on
equality for ratio_test (ratio <= threshold).
"""
from typing import Sequence, Optional, Union

import math
import logging
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError
from .linalg import EigenSpectrum, gram, eigh
from .rmt import MpSupport, mp_support, ratio_threshold
from .signal import Hypothesis, ObservationMatrix

logger = logging.getLogger(__name__)

ALPHA_TOL = 1e-12
CLAMP_TOL = 1e-9


@dataclass(frozen=True)
class Decision:
    label: Hypothesis
    statistic: float
    threshold: float
    detector_id: str


@dataclass(frozen=True)
class FusionDecision:
    label: Hypothesis
    votes_h1: int
    votes_total: int
    detector_id: str = 'energy-vote'

    @property
    def statistic(self) -> float:
        return self.votes_h1 / self.votes_total

    @property
    def threshold(self) -> float:
        return 0.5


def _label(fired: bool) -> Hypothesis:
    return Hypothesis.H1 if fired else Hypothesis.H0


def support_test(
    spectrum: EigenSpectrum,
    support: MpSupport,
    slack: float = 0.0,
    alpha: Optional[float] = None,
) -> Decision:
    """ H0 iff every eigenvalue lies in [a (1 - slack), b (1 + slack)]

    The statistic is the largest signed excursion of an eigenvalue outside
    [a, b] (negative when all are inside), compared against 0.
    """
    if slack < 0:
        raise DomainError(f'slack must be >= 0, got {slack=}')
    if alpha is not None and abs(alpha - support.alpha) > ALPHA_TOL:
        raise ConfigError(f'Spectrum aspect ratio {alpha} does not match'
                          + f' support alpha {support.alpha}')

    values = spectrum.as_array()
    a, b = support.a, support.b
    excursion = float(np.max(np.maximum(a - values, values - b)))
    inside = np.all((values >= a * (1 - slack)) & (values <= b * (1 + slack)))
    return Decision(_label(not inside), excursion, 0.0, 'mp-support')


def clamp_lambda_min(spectrum: EigenSpectrum) -> float:
    """ lambda_min with round-off negatives of a PSD spectrum set to 0 """
    lambda_min = spectrum.lambda_min
    if lambda_min < 0:
        if lambda_min >= -CLAMP_TOL * abs(spectrum.trace):
            logger.debug(f'clamping {lambda_min=} to 0')
            return 0.0
        raise DomainError(f'Spectrum is not positive semidefinite, {lambda_min=}')
    return lambda_min


def ratio_test(spectrum: EigenSpectrum, alpha: float) -> Decision:
    """ H0 iff lmax / lmin <= (1 + sqrt(alpha))^2 / (1 - sqrt(alpha))^2

    A zero lambda_min (after clamping) forces H1 with an infinite statistic.
    """
    threshold = ratio_threshold(alpha)
    lambda_min = clamp_lambda_min(spectrum)

    if lambda_min == 0.0:
        return Decision(Hypothesis.H1, math.inf, threshold, 'eig-ratio')

    ratio = spectrum.lambda_max / lambda_min
    return Decision(_label(ratio > threshold), ratio, threshold, 'eig-ratio')


def energy_test(samples: Sequence[complex], V_T: float) -> Decision:
    """ H1 iff (1/N) sum |y(k)|^2 >= V_T """
    samples = np.asarray(samples, dtype=np.complex128).ravel()
    if samples.size == 0:
        raise DomainError('energy_test needs at least one sample')
    if not V_T > 0:
        raise DomainError(f'V_T must be > 0, got {V_T=}')

    energy = float(np.mean(np.abs(samples) ** 2))
    return Decision(_label(energy >= V_T), energy, float(V_T), 'energy')


def vote(decisions: Sequence[Union[Decision, FusionDecision]]) -> FusionDecision:
    """ Majority of the per-sensor labels, an exact tie decides H1 """
    if len(decisions) == 0:
        raise DomainError('vote needs at least one decision')

    votes_h1 = sum(1 for d in decisions if d.label is Hypothesis.H1)
    total = len(decisions)
    return FusionDecision(_label(2 * votes_h1 >= total), votes_h1, total)


def energy_vote(obs: ObservationMatrix, V_T: float) -> FusionDecision:
    """ Every sensor runs energy_test on its own row, then a majority vote """
    return vote([energy_test(row, V_T) for row in obs.Y])


def observation_spectrum(obs: ObservationMatrix, solver: str = 'jacobi') -> EigenSpectrum:
    return eigh(gram(obs.Y), solver=solver)


def rmt_detect_known_variance(
    obs: ObservationMatrix,
    sigma2: float,
    slack: float = 0.0,
    solver: str = 'jacobi',
) -> Decision:
    support = mp_support(sigma2, obs.alpha)
    spectrum = observation_spectrum(obs, solver)
    return support_test(spectrum, support, slack=slack, alpha=obs.alpha)


def rmt_detect_blind(obs: ObservationMatrix, solver: str = 'jacobi') -> Decision:
    # Only alpha = K/N is used, never a noise variance
    alpha = obs.alpha
    ratio_threshold(alpha)  # rejects K >= N before the eigensolve
    spectrum = observation_spectrum(obs, solver)
    return ratio_test(spectrum, alpha)
