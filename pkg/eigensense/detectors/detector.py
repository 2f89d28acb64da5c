from typing import Any, Dict, Optional, Union
from abc import ABC, abstractmethod

from ..detect import Decision, FusionDecision
from ..errors import ConfigError, UnsupportedRegimeError
from ..linalg import EigenSpectrum
from ..signal import ObservationMatrix

Outcome = Union[Decision, FusionDecision]


class Detector(ABC):

    def __init__(self, params: Optional[Dict[str, Any]] = None) -> None:
        self._params = dict(params or {})

    @property
    def params(self) -> Dict[str, Any]:
        return self._params

    @classmethod
    @abstractmethod
    def detector_id(cls) -> str:
        raise NotImplementedError

    @classmethod
    def requires_variance(cls) -> bool:
        return False

    @classmethod
    def supports(cls, K: int, N: int) -> bool:
        return 1 <= K <= N

    def needs_sigma2(self) -> bool:
        return self.requires_variance()

    def decide(
        self,
        obs: ObservationMatrix,
        sigma2: Optional[float] = None,
        spectrum: Optional[EigenSpectrum] = None,
    ) -> Outcome:
        """ Label one observation, reusing `spectrum` when the caller already has it """
        if self.needs_sigma2() and sigma2 is None:
            raise ConfigError(f'Detector {self.detector_id()} needs the noise variance')
        if not self.supports(obs.K, obs.N):
            raise UnsupportedRegimeError(f'Detector {self.detector_id()} does not support'
                                         + f' K={obs.K} N={obs.N}')
        return self._decide(obs, sigma2, spectrum)

    @abstractmethod
    def _decide(
        self,
        obs: ObservationMatrix,
        sigma2: Optional[float],
        spectrum: Optional[EigenSpectrum],
    ) -> Outcome:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}({self._params})'
