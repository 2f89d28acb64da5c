import pandas as pd

from .experiment_job import ExperimentJob
from ..montecarlo import ExperimentSummary


class ComparisonJob(ExperimentJob):

    @classmethod
    def kind(cls) -> str:
        return 'comparison'

    def dat_frame(self, summary: ExperimentSummary) -> pd.DataFrame:
        """ One block per detector, each a curve of proportion correct over N """
        rows = [
            {
                'detector': p.detector,
                'N': point.N,
                'proportion_correct': p.proportion,
                'ci_low': p.ci_low,
                'ci_high': p.ci_high,
                'sensitivity': p.sensitivity,
                'specificity': p.specificity,
            }
            for point in summary.points
            for p in point.proportions
        ]
        frame = pd.DataFrame(rows)
        if frame.empty:
            return frame
        return frame.sort_values(['detector', 'N'], kind='stable').reset_index(drop=True)
