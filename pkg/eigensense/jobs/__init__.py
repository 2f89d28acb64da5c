from typing import Dict, Type

from .experiment_job import ExperimentJob
from .convergence_job import ConvergenceJob
from .comparison_job import ComparisonJob

job_types: Dict[str, Type[ExperimentJob]] = {
    'convergence': ConvergenceJob,
    'comparison': ComparisonJob,
}
