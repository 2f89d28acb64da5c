from typing import Any, Dict, Optional, Type

from .detector import Detector, Outcome
from .rmt import RatioDetector, SupportDetector
from .energy import EnergyDetector, EnergyVoteDetector
from ..errors import ConfigError

detector_classes: Dict[str, Type[Detector]] = {
    'mp-support': SupportDetector,
    'eig-ratio': RatioDetector,
    'energy': EnergyDetector,
    'energy-vote': EnergyVoteDetector,
}


def make_detector(detector_id: str, params: Optional[Dict[str, Any]] = None) -> Detector:
    if detector_id not in detector_classes:
        raise ConfigError(f'Unknown detector {detector_id!r},'
                          + f' expected one of {sorted(detector_classes)}')
    return detector_classes[detector_id](params)
