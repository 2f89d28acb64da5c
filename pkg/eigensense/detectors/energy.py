from typing import Optional

from .detector import Detector
from ..detect import Decision, FusionDecision, energy_test, energy_vote
from ..errors import ConfigError
from ..linalg import EigenSpectrum
from ..signal import ObservationMatrix


class EnergyDetector(Detector):
    """ Single sensor energy detector, V_T defaults to the noise variance """

    @classmethod
    def detector_id(cls) -> str:
        return 'energy'

    @classmethod
    def requires_variance(cls) -> bool:
        return True

    def needs_sigma2(self) -> bool:
        return self.params.get('vt') is None

    def threshold(self, sigma2: Optional[float]) -> float:
        vt = self.params.get('vt')
        return float(vt if vt is not None else sigma2)

    def _decide(
        self,
        obs: ObservationMatrix,
        sigma2: Optional[float],
        spectrum: Optional[EigenSpectrum],
    ) -> Decision:
        sensor = self.params.get('sensor', 0)
        if not 0 <= sensor < obs.K:
            raise ConfigError(f'sensor {sensor} out of range for K={obs.K}')
        return energy_test(obs.Y[sensor], self.threshold(sigma2))


class EnergyVoteDetector(EnergyDetector):
    """ Every sensor runs the energy detector, majority vote decides """

    @classmethod
    def detector_id(cls) -> str:
        return 'energy-vote'

    def _decide(
        self,
        obs: ObservationMatrix,
        sigma2: Optional[float],
        spectrum: Optional[EigenSpectrum],
    ) -> FusionDecision:
        return energy_vote(obs, self.threshold(sigma2))
