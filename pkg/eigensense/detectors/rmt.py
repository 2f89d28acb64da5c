from typing import Optional

from .detector import Detector
from ..detect import (
    Decision, ratio_test, rmt_detect_blind, rmt_detect_known_variance, support_test
)
from ..linalg import EigenSpectrum
from ..rmt import mp_support
from ..signal import ObservationMatrix


class RatioDetector(Detector):
    """ Blind eigenvalue ratio test, uses only alpha = K/N """

    @classmethod
    def detector_id(cls) -> str:
        return 'eig-ratio'

    @classmethod
    def supports(cls, K: int, N: int) -> bool:
        return 1 <= K < N

    def _decide(
        self,
        obs: ObservationMatrix,
        sigma2: Optional[float],
        spectrum: Optional[EigenSpectrum],
    ) -> Decision:
        if spectrum is None:
            return rmt_detect_blind(obs, solver=self.params.get('solver', 'jacobi'))
        return ratio_test(spectrum, obs.alpha)


class SupportDetector(Detector):
    """ Marchenko-Pastur support test, needs the noise variance """

    @classmethod
    def detector_id(cls) -> str:
        return 'mp-support'

    @classmethod
    def requires_variance(cls) -> bool:
        return True

    @classmethod
    def supports(cls, K: int, N: int) -> bool:
        return 1 <= K < N

    def _decide(
        self,
        obs: ObservationMatrix,
        sigma2: Optional[float],
        spectrum: Optional[EigenSpectrum],
    ) -> Decision:
        slack = self.params.get('slack', 0.0)
        if spectrum is None:
            return rmt_detect_known_variance(obs, sigma2, slack=slack,
                                             solver=self.params.get('solver', 'jacobi'))
        return support_test(spectrum, mp_support(sigma2, obs.alpha), slack=slack,
                            alpha=obs.alpha)
