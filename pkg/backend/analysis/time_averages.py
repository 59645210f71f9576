"""
Running time averages <x(t)> = (1/t) int_0^t x(s) ds
"""
import numpy as np
from scipy.integrate import cumulative_trapezoid

from backend.errors import DomainError
from backend.integrator import Trajectory
from backend.integrator.trajectory import ColumnKey


def time_average(traj: Trajectory, component: ColumnKey) -> np.ndarray:
    """
    Trapezoid-rule running average on the recorded grid

    The first entry is x(t_0) by convention.
    """
    if len(traj) < 2:
        raise DomainError(f"time average needs at least 2 recorded points, got {len(traj)}")
    x = traj.column(component)
    t = traj.times
    integral = cumulative_trapezoid(x, t, initial=0.0)
    averages = np.empty_like(x)
    averages[0] = x[0]
    averages[1:] = integral[1:] / (t[1:] - t[0])
    return averages


def tail_mask(times: np.ndarray, tail_fraction: float) -> np.ndarray:
    """Boolean mask of the last tail_fraction of the time span"""
    if not 0.0 < tail_fraction < 1.0:
        raise DomainError(f"tail_fraction must lie in (0, 1), got {tail_fraction}")
    start = times[-1] - tail_fraction * (times[-1] - times[0])
    return times >= start
