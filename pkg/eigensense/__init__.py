__version__ = '0.1.0'

from .benchmark import Benchmark  # noqa: E402
