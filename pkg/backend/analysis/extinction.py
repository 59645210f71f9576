"""
Empirical Lyapunov exponent of I and the extinction classifier
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import linregress

from backend.analysis.time_averages import tail_mask
from backend.errors import InsufficientDataError
from backend.integrator import Trajectory
from config import Config

logger = logging.getLogger(__name__)

MIN_FIT_POINTS = 10


@dataclass(frozen=True)
class ExtinctionVerdict:
    lyapunov_slope: float
    final_i: float
    classified_extinct: bool
    points_used: int = 0
    points_dropped: int = 0
    rate_bound: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            'lyapunov_slope': self.lyapunov_slope,
            'final_i': self.final_i,
            'classified_extinct': self.classified_extinct,
            'points_used': self.points_used,
            'points_dropped': self.points_dropped,
            'rate_bound': self.rate_bound,
        }


def lyapunov_estimate(traj: Trajectory, tail_fraction: float = Config.TAIL_FRACTION,
                      eps_extinct: float = Config.EPS_EXTINCT,
                      rate_bound: Optional[float] = None) -> ExtinctionVerdict:
    """
    Least-squares slope of log I(t) against t over the tail window

    The fit stops at the first point where I falls below the log floor; the
    remaining points of the window are dropped.

    Raises:
        InsufficientDataError: fewer than 10 usable points
    """
    window = tail_mask(traj.times, tail_fraction)
    t = traj.times[window]
    infected = traj.column('I')[window]

    below = np.flatnonzero(~(infected >= Config.LOG_FLOOR))
    used = int(below[0]) if len(below) else len(infected)
    dropped = len(infected) - used
    if dropped:
        logger.info("log I fit stops at t=%.6g; %d points below the floor dropped", t[used], dropped)
    if used < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"only {used} usable points for the log I fit (need {MIN_FIT_POINTS})"
        )

    fit = linregress(t[:used], np.log(infected[:used]))
    slope = float(fit.slope)
    final_i = float(traj.column('I')[-1])
    extinct = slope < 0.0 and final_i < eps_extinct
    if rate_bound is not None and math.isfinite(rate_bound) and slope > rate_bound:
        logger.debug("empirical slope %.4g above the limsup bound %.4g", slope, rate_bound)
    return ExtinctionVerdict(
        lyapunov_slope=slope,
        final_i=final_i,
        classified_extinct=extinct,
        points_used=used,
        points_dropped=dropped,
        rate_bound=rate_bound,
    )
