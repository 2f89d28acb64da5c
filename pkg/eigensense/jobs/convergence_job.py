import pandas as pd

from .experiment_job import ExperimentJob
from ..montecarlo import ExperimentSummary


class ConvergenceJob(ExperimentJob):

    @classmethod
    def kind(cls) -> str:
        return 'convergence'

    def dat_frame(self, summary: ExperimentSummary) -> pd.DataFrame:
        # N, mean ratio with its standard error, and the asymptote it tends to
        return pd.DataFrame([
            {
                'N': p.N,
                'K': p.K,
                'mean_ratio': p.mean_ratio,
                'ratio_stderr': p.ratio_stderr,
                'asymptote': p.asymptote,
                'ratio_to_asymptote': p.ratio_to_asymptote,
            }
            for p in summary.points
        ])
