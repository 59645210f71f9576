"""
Compensated Euler-Maruyama integration with per-step Poisson jumps

One step: X' = X + b(X) dt + g(X) dW, then every jump event sampled for the
step is applied in sampled order (each using the state left by the previous
one), then any negative component is clamped to zero and counted.
"""
import logging
import math
from typing import Callable, Optional, Sequence

import numpy as np

from backend.errors import DomainError, JumpOverflowError, SimulationError
from backend.integrator.trajectory import Diagnostics, GridSpec, Trajectory
from backend.model import LevyMeasure, Rates, SicaParams, SicaState, dt_safe, in_feasible_region
from backend.model.sica_model import drift_terms, jump_update, noise_amplitude
from backend.noise import RngStream, gaussian_increment, poisson_count, sample_marks
from config import Config

logger = logging.getLogger(__name__)

ProgressHook = Callable[[int], None]


def euler_increment(s, i, c, a, r: Rates, h, dw):
    """Drift and diffusion part of one step; works on scalars or arrays"""
    ds, di, dc, da = drift_terms(s, i, c, a, r)
    g = noise_amplitude(s, i, r) * dw
    return s + ds * h - g, i + di * h + g, c + dc * h, a + da * h


def _apply_jump_sequence(s: float, i: float, sizes, diagnostics: Diagnostics):
    for jump_size in sizes:
        try:
            s, i = jump_update(s, i, float(jump_size))
            diagnostics.jump_count += 1
        except JumpOverflowError as e:
            diagnostics.jump_overflow_count += 1
            logger.debug("skipping jump: %s", e)
    return s, i


def em_step(state: SicaState, p: SicaParams, levy: LevyMeasure, dt: float,
            rng: Optional[RngStream] = None, *,
            dw: Optional[float] = None,
            jump_sizes: Optional[Sequence[float]] = None,
            diagnostics: Optional[Diagnostics] = None,
            t: float = 0.0) -> SicaState:
    """
    Advance one Euler-Maruyama step

    Args:
        state: state at the start of the step
        p: model parameters
        levy: jump measure
        dt: step size
        rng: stream supplying dW and the jump events (not needed when both are forced)
        dw: forced Brownian increment
        jump_sizes: forced jump sizes applied after the diffusion update
        diagnostics: counters updated with clamps, jumps and overflows
        t: time at the start of the step, used in error reports

    Returns:
        State at the end of the step, clamped to the nonnegative orthant
    """
    if not (math.isfinite(dt) and dt > 0):
        raise DomainError(f"dt must be positive and finite, got {dt}")
    if diagnostics is None:
        diagnostics = Diagnostics()
    if (dw is None or jump_sizes is None) and rng is None:
        raise DomainError("em_step needs an RngStream unless dw and jump_sizes are both given")

    if dw is None:
        dw = gaussian_increment(rng, dt)
    if jump_sizes is None:
        count = poisson_count(rng, levy.total_rate * dt)
        batch = sample_marks(rng, levy, count)
        sizes = levy.jump_sizes[list(batch.mark_indices)] if batch.count else ()
    else:
        sizes = jump_sizes

    r = Rates.from_params(p, levy)
    s, i, c, a = euler_increment(state.s, state.i, state.c, state.a, r, dt, dw)
    s, i = _apply_jump_sequence(s, i, sizes, diagnostics)

    values = [s, i, c, a]
    if not all(math.isfinite(v) for v in values):
        raise SimulationError("non-finite state after step", time=t + dt)
    for k, v in enumerate(values):
        if v < 0.0:
            values[k] = 0.0
            diagnostics.clamp_count += 1
    return SicaState.from_array(values)


def simulate_paths(initials: np.ndarray, p: SicaParams, levy: LevyMeasure, grid: GridSpec,
                   streams: Sequence[RngStream], *, first_path_index: int = 0,
                   block_size: int = Config.NOISE_BLOCK_SIZE,
                   on_block: Optional[ProgressHook] = None) -> list:
    """
    Integrate several paths at once, one RngStream per path

    Each path draws its noise block by block from its own stream, so the
    result for a path does not depend on which other paths share the call.

    Args:
        initials: (paths, 4) initial states
        first_path_index: index reported in errors for initials[0]
        on_block: called with the number of steps completed after each block

    Returns:
        List of Trajectory, one per path
    """
    initials = np.asarray(initials, dtype=float).reshape(-1, 4)
    n_paths = len(initials)
    if n_paths != len(streams):
        raise DomainError(f"{n_paths} initial states but {len(streams)} streams")

    r = Rates.from_params(p, levy)
    times = grid.step_times()
    h = np.diff(times)
    sqrt_h = np.sqrt(h)
    n_steps = grid.n_steps
    record_steps = grid.record_steps()
    is_record = np.zeros(n_steps + 1, dtype=bool)
    is_record[record_steps] = True
    jump_sizes = levy.jump_sizes

    s, i, c, a = (initials[:, k].copy() for k in range(4))
    n_rec = len(record_steps)
    recorded = np.empty((n_paths, n_rec, 4))
    martingale = np.zeros((n_paths, n_rec))
    quad_var = np.zeros((n_paths, n_rec))
    recorded[:, 0] = initials
    rec = 1

    diagnostics = [Diagnostics() for _ in range(n_paths)]
    clamps = np.zeros(n_paths, dtype=np.int64)
    residual = np.zeros(n_paths)
    m_acc = np.zeros(n_paths)
    q_acc = np.zeros(n_paths)

    for start in range(0, n_steps, block_size):
        stop = min(start + block_size, n_steps)
        blocks = [stream.draw_block(h[start:stop], levy) for stream in streams]
        normals = np.stack([b.normals for b in blocks])
        counts = np.stack([b.counts for b in blocks])
        has_events = counts.any(axis=0)
        cursors = np.zeros(n_paths, dtype=np.int64)

        for j in range(stop - start):
            k = start + j
            hk = h[k]
            dw = normals[:, j] * sqrt_h[k]
            n_before = s + i + c + a
            expected = hk * (r.lam - r.mu * n_before - r.d * a)

            sigma_s = r.sigma * s
            m_acc += sigma_s * dw
            q_acc += sigma_s * sigma_s * hk

            s, i, c, a = euler_increment(s, i, c, a, r, hk, dw)

            if has_events[j]:
                for path in np.flatnonzero(counts[:, j]):
                    n_events = counts[path, j]
                    marks = blocks[path].mark_indices[cursors[path]:cursors[path] + n_events]
                    cursors[path] += n_events
                    s[path], i[path] = _apply_jump_sequence(
                        s[path], i[path], jump_sizes[marks], diagnostics[path]
                    )

            n_after = s + i + c + a
            if not np.all(np.isfinite(n_after)):
                bad = int(np.flatnonzero(~np.isfinite(n_after))[0])
                raise SimulationError("non-finite state", time=float(times[k + 1]),
                                      path_index=first_path_index + bad)
            np.maximum(residual, np.abs(n_after - n_before - expected) / np.maximum(1.0, n_before),
                       out=residual)

            negative = (s < 0) | (i < 0) | (c < 0) | (a < 0)
            if negative.any():
                for arr in (s, i, c, a):
                    mask = arr < 0
                    clamps += mask
                    arr[mask] = 0.0

            if is_record[k + 1]:
                recorded[:, rec, 0] = s
                recorded[:, rec, 1] = i
                recorded[:, rec, 2] = c
                recorded[:, rec, 3] = a
                martingale[:, rec] = m_acc
                quad_var[:, rec] = q_acc
                rec += 1

        if on_block is not None:
            on_block(stop - start)

    record_times = times[record_steps]
    trajectories = []
    for path in range(n_paths):
        diag = diagnostics[path]
        diag.clamp_count = int(clamps[path])
        diag.martingale_path = martingale[path].copy()
        diag.quadratic_variation_path = quad_var[path].copy()
        diag.max_balance_residual = float(residual[path])
        trajectories.append(Trajectory(record_times.copy(), recorded[path].copy(), diag))
    return trajectories


def warn_run_conditions(initial: SicaState, p: SicaParams, grid: GridSpec) -> None:
    """Log the start-of-run warnings shared by single paths and ensembles"""
    if not in_feasible_region(initial, p):
        logger.warning("initial state %s lies outside the feasible region [%.6g, %.6g]",
                       initial, p.n_lower, p.n_upper)
    safe = dt_safe(p)
    if grid.dt > safe:
        logger.warning("dt=%.3g exceeds the positivity heuristic dt_safe=%.3g; expect clamps",
                       grid.dt, safe)


def simulate(initial: SicaState, p: SicaParams, levy: LevyMeasure, grid: GridSpec,
             rng: RngStream) -> Trajectory:
    """
    Simulate one path on the grid

    Equal, bit for bit, to path `rng.stream_id` of an ensemble run with the
    same seed.
    """
    warn_run_conditions(initial, p, grid)

    trajectory = simulate_paths(initial.as_array()[None, :], p, levy, grid, [rng],
                                first_path_index=rng.stream_id)[0]
    diag = trajectory.diagnostics
    if diag.clamp_count or diag.jump_overflow_count:
        logger.warning("path %d: %d clamps, %d jump overflows",
                       rng.stream_id, diag.clamp_count, diag.jump_overflow_count)
    return trajectory
