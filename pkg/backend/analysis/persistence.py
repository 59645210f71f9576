"""
Persistence-in-the-mean check against the closed-form lower bounds
"""
import logging
from dataclasses import asdict, dataclass

import numpy as np

from backend.analysis.time_averages import tail_mask, time_average
from backend.integrator import Trajectory
from backend.model import ThresholdReport
from config import Config

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PersistenceVerdict:
    i_time_avg_tail: float
    s_time_avg_tail: float
    i_bound: float
    s_bound: float
    i_satisfied: bool
    s_satisfied: bool
    c_time_avg_tail: float = float('nan')
    a_time_avg_tail: float = float('nan')
    informational: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def verify_persistence(traj: Trajectory, report: ThresholdReport,
                       tail_fraction: float = Config.TAIL_FRACTION,
                       margin: float = Config.PERSISTENCE_MARGIN) -> PersistenceVerdict:
    """
    Compare tail means of <I(t)> and <S(t)> with margin * bound

    When the report says the persistence criterion does not hold the verdict
    is still computed but flagged informational.
    """
    window = tail_mask(traj.times, tail_fraction)

    def tail_mean(component: str) -> float:
        return float(np.mean(time_average(traj, component)[window]))

    i_tail = tail_mean('I')
    s_tail = tail_mean('S')
    informational = not report.persistence_holds
    if informational:
        logger.info("persistence criterion does not hold (%.6g <= %.6g); verdict is informational",
                    report.pers_lhs, report.pers_rhs)

    return PersistenceVerdict(
        i_time_avg_tail=i_tail,
        s_time_avg_tail=s_tail,
        i_bound=report.i_mean_lower_bound,
        s_bound=report.s_mean_lower_bound,
        i_satisfied=i_tail >= margin * report.i_mean_lower_bound,
        s_satisfied=s_tail >= margin * report.s_mean_lower_bound,
        c_time_avg_tail=tail_mean('C'),
        a_time_avg_tail=tail_mean('A'),
        informational=informational,
    )
