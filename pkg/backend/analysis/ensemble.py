"""
Monte Carlo ensembles over seeded streams

Paths are split into chunks that run concurrently; every path draws from its
own RngStream(seed, path_index), and all reductions run over the paths in
index order, so results are bit-reproducible for a given seed whatever the
worker count.
"""
import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, List, Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

from backend.analysis.extinction import ExtinctionVerdict, lyapunov_estimate
from backend.analysis.martingale import MartingaleReport, martingale_diagnostic
from backend.analysis.persistence import PersistenceVerdict, verify_persistence
from backend.errors import InsufficientDataError
from backend.integrator import Trajectory, simulate_paths, warn_run_conditions
from backend.model import COMPARTMENTS, ThresholdReport, compute_thresholds
from backend.noise import RNG_ALGORITHM, RngStream
from config import Config

if TYPE_CHECKING:
    from backend.experiments.run_config import RunConfig

logger = logging.getLogger(__name__)

QUANTILES = (0.025, 0.5, 0.975)


@dataclass
class EnsembleStats:
    """Per-time mean, variance and quantiles for each compartment"""

    times: np.ndarray
    mean: np.ndarray       # (points, 4)
    variance: np.ndarray   # (points, 4)
    q025: np.ndarray
    q50: np.ndarray
    q975: np.ndarray
    path_count: int

    @classmethod
    def from_trajectories(cls, trajectories: List[Trajectory]) -> "EnsembleStats":
        stacked = np.stack([traj.states for traj in trajectories])  # (paths, points, 4)
        q = np.quantile(stacked, QUANTILES, axis=0, method="linear")
        return cls(
            times=trajectories[0].times.copy(),
            mean=stacked.mean(axis=0),
            variance=stacked.var(axis=0),
            q025=q[0],
            q50=q[1],
            q975=q[2],
            path_count=len(trajectories),
        )

    def to_frame(self) -> pd.DataFrame:
        columns = {'t': self.times}
        for k, comp in enumerate(COMPARTMENTS):
            name = comp.value
            columns[f'mean_{name}'] = self.mean[:, k]
            columns[f'var_{name}'] = self.variance[:, k]
            columns[f'q025_{name}'] = self.q025[:, k]
            columns[f'q50_{name}'] = self.q50[:, k]
            columns[f'q975_{name}'] = self.q975[:, k]
        return pd.DataFrame(columns)


@dataclass
class EnsembleResult:
    stats: EnsembleStats
    report: ThresholdReport
    extinction: List[Optional[ExtinctionVerdict]]
    persistence: List[PersistenceVerdict]
    martingale: List[MartingaleReport]
    seed: int
    trajectories: List[Trajectory] = field(default_factory=list, repr=False)
    total_clamps: int = 0
    total_jump_overflows: int = 0
    max_balance_residual: float = 0.0

    @property
    def path_count(self) -> int:
        return self.stats.path_count

    @property
    def extinction_rate(self) -> float:
        return sum(bool(v and v.classified_extinct) for v in self.extinction) / self.path_count

    @property
    def persistence_i_rate(self) -> float:
        return sum(v.i_satisfied for v in self.persistence) / self.path_count

    @property
    def persistence_s_rate(self) -> float:
        return sum(v.s_satisfied for v in self.persistence) / self.path_count

    def verdict_summary(self) -> dict:
        slopes = [v.lyapunov_slope for v in self.extinction if v is not None]
        return {
            'path_count': self.path_count,
            'seed': self.seed,
            'rng_algorithm': RNG_ALGORITHM,
            'noise_block_size': Config.NOISE_BLOCK_SIZE,
            'extinction_rate': self.extinction_rate,
            'persistence_i_rate': self.persistence_i_rate,
            'persistence_s_rate': self.persistence_s_rate,
            'negative_slope_rate': sum(s < 0 for s in slopes) / self.path_count,
            'unfitted_paths': sum(v is None for v in self.extinction),
            'persistence_informational': bool(self.persistence and self.persistence[0].informational),
            'qv_within_bound_rate': sum(m.within_bound for m in self.martingale) / self.path_count,
            'total_clamps': self.total_clamps,
            'total_jump_overflows': self.total_jump_overflows,
            'max_balance_residual': self.max_balance_residual,
            'thresholds': self.report.to_dict(),
        }


def _chunks(count: int, workers: int) -> List[range]:
    size = math.ceil(count / max(1, workers))
    return [range(start, min(start + size, count)) for start in range(0, count, size)]


def ensemble_run(config: "RunConfig", seed: Optional[int] = None, *,
                 max_workers: int = Config.MAX_WORKERS,
                 progress_callback: Optional[Callable[[int, str], None]] = None,
                 show_progress: bool = False,
                 keep_trajectories: bool = True) -> EnsembleResult:
    """
    Run config.path_count paths and reduce them

    Args:
        config: model, jump measure, initial state, grid, path count and analysis knobs
        seed: overrides config.seed
        max_workers: number of concurrent path chunks
        progress_callback: called with (percent, message) as blocks complete
        show_progress: draw a tqdm bar
        keep_trajectories: keep every path in the result

    Raises:
        SimulationError: a path failed; the error carries its index and time
    """
    seed = config.seed if seed is None else seed
    p, levy, grid = config.params, config.levy, config.grid
    path_count = config.path_count
    warn_run_conditions(config.initial_state, p, grid)
    initial = config.initial_state.as_array()
    total_steps = grid.n_steps * path_count
    done = [0]
    lock = threading.Lock()

    bar = tqdm(total=total_steps, desc="ensemble", unit="step", disable=not show_progress)

    def on_block(steps: int, width: int) -> None:
        with lock:
            done[0] += steps * width
            bar.update(steps * width)
            completed = done[0]
        if progress_callback:
            progress_callback(int(100 * completed / total_steps), f"integrated {completed}/{total_steps} path-steps")

    def run_chunk(indices: range) -> List[Trajectory]:
        streams = [RngStream(seed, k) for k in indices]
        initials = np.repeat(initial[None, :], len(indices), axis=0)
        return simulate_paths(initials, p, levy, grid, streams,
                              first_path_index=indices.start,
                              on_block=lambda steps: on_block(steps, len(indices)))

    chunks = _chunks(path_count, max_workers)
    try:
        with ThreadPoolExecutor(max_workers=max(1, len(chunks))) as pool:
            results = list(pool.map(run_chunk, chunks))
    finally:
        bar.close()
    trajectories = [traj for chunk in results for traj in chunk]

    report = compute_thresholds(p, levy)
    if not report.persistence_holds:
        logger.warning("persistence criterion does not hold; persistence verdicts are informational")
    extinction: List[Optional[ExtinctionVerdict]] = []
    for k, traj in enumerate(trajectories):
        try:
            extinction.append(lyapunov_estimate(traj, config.tail_fraction, config.eps_extinct,
                                                rate_bound=report.log_i_rate_bound))
        except InsufficientDataError as e:
            logger.warning("path %d: no Lyapunov fit (%s)", k, e)
            extinction.append(None)
    persistence = [verify_persistence(traj, report, config.tail_fraction, config.margin)
                   for traj in trajectories]
    martingale = [martingale_diagnostic(traj, p) for traj in trajectories]

    result = EnsembleResult(
        stats=EnsembleStats.from_trajectories(trajectories),
        report=report,
        extinction=extinction,
        persistence=persistence,
        martingale=martingale,
        seed=seed,
        trajectories=trajectories if keep_trajectories else [],
        total_clamps=sum(t.diagnostics.clamp_count for t in trajectories),
        total_jump_overflows=sum(t.diagnostics.jump_overflow_count for t in trajectories),
        max_balance_residual=max(t.diagnostics.max_balance_residual for t in trajectories),
    )
    if result.total_clamps or result.total_jump_overflows:
        logger.warning("ensemble: %d clamps, %d jump overflows across %d paths",
                       result.total_clamps, result.total_jump_overflows, path_count)
    return result
