"""
Empirical convergence orders and path-to-path gaps
"""
from typing import Sequence, Tuple

import numpy as np
from scipy.stats import linregress

from backend.errors import DomainError
from backend.integrator import Trajectory


def relative_gap(candidate: Trajectory, reference: Trajectory) -> float:
    """
    Max over recorded points and compartments of |x - x_ref| / max|x_ref|

    Each compartment is scaled by its own peak so compartments near zero do
    not dominate.
    """
    if len(candidate) != len(reference) or not np.allclose(candidate.times, reference.times):
        raise DomainError("trajectories are not on the same recorded grid")
    scale = np.maximum(np.abs(reference.states).max(axis=0), np.finfo(float).tiny)
    return float((np.abs(candidate.states - reference.states) / scale).max())


def convergence_order(step_sizes: Sequence[float], errors: Sequence[float]) -> Tuple[float, float]:
    """Slope and R^2 of log(error) against log(step size)"""
    if len(step_sizes) != len(errors) or len(step_sizes) < 2:
        raise DomainError("need at least two (step size, error) pairs")
    fit = linregress(np.log(step_sizes), np.log(errors))
    return float(fit.slope), float(fit.rvalue ** 2)
