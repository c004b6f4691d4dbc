"""Result of the exhaustive assignment search"""
from dataclasses import dataclass
from models.assignment import Assignment, SinrReport


@dataclass(frozen=True)
class OptimalSolution:
    assignment: Assignment
    report: SinrReport
    objective_linear: float
    feasible_wrt_threshold: bool
    n_enumerated: int
    n_feasible: int
    n_ties: int
    action_index: int
    steering_enabled: bool

    @property
    def objective_db(self):
        return self.report.sum_sinr_db
