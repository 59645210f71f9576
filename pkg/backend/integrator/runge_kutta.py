"""
Deterministic RK4 baseline (sigma = 0, no jumps)
"""
import numpy as np

from backend.errors import SimulationError
from backend.integrator.trajectory import Diagnostics, GridSpec, Trajectory
from backend.model import LevyMeasure, Rates, SicaParams, SicaState
from backend.model.sica_model import drift_terms


def _rhs(x: np.ndarray, r: Rates) -> np.ndarray:
    return np.array(drift_terms(x[0], x[1], x[2], x[3], r))


def rk4_step(x: np.ndarray, r: Rates, h: float) -> np.ndarray:
    """Classical fourth-order Runge-Kutta step"""
    k1 = _rhs(x, r)
    k2 = _rhs(x + 0.5 * h * k1, r)
    k3 = _rhs(x + 0.5 * h * k2, r)
    k4 = _rhs(x + h * k3, r)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def simulate_ode(initial: SicaState, p: SicaParams, grid: GridSpec) -> Trajectory:
    """Integrate the noise-free SICA system with RK4 on the grid"""
    r = Rates.from_params(p, LevyMeasure())
    times = grid.step_times()
    h = np.diff(times)
    record_steps = grid.record_steps()
    recorded = np.empty((len(record_steps), 4))
    recorded[0] = initial.as_array()

    x = initial.as_array()
    rec = 1
    next_record = record_steps[rec] if rec < len(record_steps) else -1
    for k in range(grid.n_steps):
        x = rk4_step(x, r, h[k])
        if not np.all(np.isfinite(x)):
            raise SimulationError("RK4 blow-up", time=float(times[k + 1]))
        if k + 1 == next_record:
            recorded[rec] = x
            rec += 1
            next_record = record_steps[rec] if rec < len(record_steps) else -1

    zeros = np.zeros(len(record_steps))
    return Trajectory(times[record_steps], recorded,
                      Diagnostics(martingale_path=zeros, quadratic_variation_path=zeros.copy()))
