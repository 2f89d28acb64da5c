import json
import math
from enum import Enum
from types import GeneratorType
from dataclasses import is_dataclass, asdict

import numpy as np


class CustomEncoder(json.JSONEncoder):
    """ Handles numpy values, complex numbers, enums and dataclasses.

    Non-finite floats are written as the strings 'nan', 'inf' and '-inf' so
    manifests stay valid JSON.
    """

    def default(self, obj):
        # check if we can cast it to a list
        if any(isinstance(obj, objtype) for objtype in [GeneratorType,
                                                        np.ndarray,
                                                        range,
                                                        tuple,
                                                        set]):
            return list(obj)

        if isinstance(obj, np.integer):
            return int(obj)

        if isinstance(obj, (np.floating, float)):
            return _float(float(obj))

        if isinstance(obj, (complex, np.complexfloating)):
            return [_float(obj.real), _float(obj.imag)]

        if isinstance(obj, Enum):
            return obj.value

        if is_dataclass(obj) and not isinstance(obj, type):
            return _sanitize(asdict(obj))

        return json.JSONEncoder.default(self, obj)

    def iterencode(self, o, _one_shot=False):
        return super().iterencode(_sanitize(o), _one_shot)


def _float(value: float):
    if math.isnan(value):
        return 'nan'
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return value


def _sanitize(obj):
    if isinstance(obj, float):
        return _float(obj)
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    return obj
