"""
Exceptions raised throughout eigensense.

Everything derives from EigensenseError so the CLI can map a failure to an
exit status without catching unrelated exceptions.
"""
from typing import Optional


class EigensenseError(Exception):
    pass


class DomainError(EigensenseError, ValueError):
    pass


class UnsupportedRegimeError(DomainError):
    pass


class DimensionError(EigensenseError, ValueError):
    pass


class MatrixError(EigensenseError, ValueError):
    pass


class SolverError(EigensenseError, RuntimeError):

    def __init__(self, message: str, iterations: int) -> None:
        super().__init__(message)
        self.iterations = iterations


class DegenerateSpikeError(DomainError):
    pass


class NotDetectableError(DomainError):
    pass


class InfeasibleRatioError(DomainError):
    pass


class ConfigError(EigensenseError, ValueError):
    pass


class SweepError(ConfigError):
    pass


class ParseError(EigensenseError, ValueError):

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        if line is not None:
            message = f'line {line}: {message}'
        super().__init__(message)
        self.line = line
