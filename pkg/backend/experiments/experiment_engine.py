"""
Experiment Engine - Runs one CLI experiment and writes its outputs
"""
import logging
from typing import Callable, Dict, List, Optional

from backend.analysis import EnsembleStats, ensemble_run, martingale_diagnostic
from backend.experiments.run_config import RunConfig
from backend.export import JSONReportGenerator, PlotSeries, SVGPlotGenerator, TableGenerator
from backend.integrator import Trajectory, simulate, simulate_ode
from backend.model import COMPARTMENTS, compute_thresholds
from backend.noise import RNG_ALGORITHM, RngStream
from backend.verification import InvariantSuite, format_table
from config import Config
from templates.svg_format.plot_template import PlotFormat

logger = logging.getLogger(__name__)

PLOTTED = ('S', 'I')


class ExperimentEngine:
    """Orchestrates thresholds / simulate / ensemble / ode runs for one config"""

    def __init__(self, config: RunConfig, output_dir: str = None, fmt: str = "csv", svg: bool = False):
        self.config = config
        self.output_dir = output_dir or Config.OUTPUT_DIR
        self.svg = svg

        self.tables = TableGenerator(self.output_dir, fmt=fmt)
        self.reports = JSONReportGenerator(self.output_dir)
        self.plots = SVGPlotGenerator(self.output_dir) if svg else None

        # Progress tracking
        self.progress_callback = None
        self.current_progress = 0

    def set_progress_callback(self, callback: Callable[[int, str], None]):
        """Set callback for progress updates"""
        self.progress_callback = callback

    def _update_progress(self, progress: int, message: str):
        """Update progress"""
        if progress == self.current_progress and 0 < progress < 100:
            return
        self.current_progress = progress
        if self.progress_callback:
            self.progress_callback(progress, message)
        logger.info("[%d%%] %s", progress, message)

    def _metadata(self, seed: Optional[int] = None) -> Dict:
        return {
            'config': self.config.to_dict(),
            'seed': self.config.seed if seed is None else seed,
            'rng_algorithm': RNG_ALGORITHM,
            'noise_block_size': Config.NOISE_BLOCK_SIZE,
        }

    def _plot_trajectory(self, traj: Trajectory, filename: str, title: str) -> Optional[str]:
        if self.plots is None:
            return None
        series = [PlotSeries(label=name, times=traj.times, values=traj.column(name)) for name in PLOTTED]
        return str(self.plots.generate(series, filename, title=title))

    def run_thresholds(self) -> Dict:
        """Evaluate both criteria and write thresholds.json"""
        self._update_progress(0, "Computing thresholds...")
        report = compute_thresholds(self.config.params, self.config.levy)
        data = report.to_dict()
        path = self.reports.generate(data, "thresholds.json")
        self._update_progress(100, "Thresholds complete")
        return {'report': data, 'files': [str(path)]}

    def run_simulate(self, seed: Optional[int] = None) -> Dict:
        """
        Simulate a single path and write its trajectory table

        Returns:
            Dict with:
            - diagnostics: clamp / jump counters and residuals
            - martingale: M_T/T, <M>_T/T and the bound
            - final_state: state at t_end
            - files: written paths
        """
        seed = self.config.seed if seed is None else seed
        self._update_progress(0, f"Simulating one path (seed={seed})...")
        traj = simulate(self.config.initial_state, self.config.params, self.config.levy,
                        self.config.grid, RngStream(seed, 0))

        self._update_progress(80, "Writing trajectory...")
        stem = f"trajectory_seed{seed}"
        files = [str(self.tables.generate_trajectory(traj, stem))]
        plot = self._plot_trajectory(traj, f"{stem}.svg", "Susceptible and infected populations")
        if plot:
            files.append(plot)

        self._update_progress(100, "Simulation complete")
        return {
            'diagnostics': traj.diagnostics.summary(),
            'martingale': martingale_diagnostic(traj, self.config.params).to_dict(),
            'final_state': traj.final_state.model_dump(),
            'files': files,
        }

    def run_ensemble(self, seed: Optional[int] = None, show_progress: bool = False) -> Dict:
        """Run the ensemble, write per-time stats and the verdict-rate report"""
        seed = self.config.seed if seed is None else seed
        self._update_progress(0, f"Running {self.config.path_count} paths (seed={seed})...")
        result = ensemble_run(self.config, seed,
                              progress_callback=lambda pct, msg: self._update_progress(min(pct, 95), msg),
                              show_progress=show_progress, keep_trajectories=False)

        self._update_progress(95, "Writing ensemble statistics...")
        files = [str(self.tables.generate_stats(result.stats.to_frame(), "ensemble_stats"))]
        summary = result.verdict_summary()
        report = {
            **self._metadata(seed),
            'verdicts': summary,
            'extinction': [v.to_dict() if v is not None else None for v in result.extinction],
            'persistence': [v.to_dict() for v in result.persistence],
            'martingale': [m.to_dict() for m in result.martingale],
        }
        files.append(str(self.reports.generate(report, "ensemble_report.json")))
        if self.plots is not None:
            files.append(str(self.plots.generate(
                self._band_series(result.stats), "ensemble.svg",
                title=f"Ensemble mean and 95% band ({result.path_count} paths)",
            )))

        self._update_progress(100, "Ensemble complete")
        return {'verdicts': summary, 'files': files}

    @staticmethod
    def _band_series(stats: EnsembleStats) -> List[PlotSeries]:
        series = []
        for name in PLOTTED:
            k = [c.value for c in COMPARTMENTS].index(name)
            series.append(PlotSeries(
                label=f"mean {name}",
                times=stats.times,
                values=stats.mean[:, k],
                band_low=stats.q025[:, k],
                band_high=stats.q975[:, k],
                color=PlotFormat.get_series_color(name, k),
            ))
        return series

    def run_ode(self) -> Dict:
        """Deterministic RK4 baseline (sigma and jumps ignored)"""
        self._update_progress(0, "Integrating deterministic baseline...")
        traj = simulate_ode(self.config.initial_state, self.config.params, self.config.grid)
        files = [str(self.tables.generate_trajectory(traj, "ode"))]
        plot = self._plot_trajectory(traj, "ode.svg", "Deterministic baseline")
        if plot:
            files.append(plot)
        self._update_progress(100, "ODE baseline complete")
        return {'final_state': traj.final_state.model_dump(), 'files': files}

    def run_verify(self, seed: Optional[int] = None) -> Dict:
        """Run the invariant suite and write verify_report.json"""
        suite = InvariantSuite(self.config, seed)
        results = suite.run(progress_callback=self._update_progress)
        data = {
            **self._metadata(suite.seed),
            'checks': [{'name': r.name, 'passed': r.passed, 'detail': r.detail} for r in results],
        }
        path = self.reports.generate(data, "verify_report.json")
        self._update_progress(100, "Verification complete")
        return {
            'passed': all(r.passed for r in results),
            'results': results,
            'table': format_table(results),
            'files': [str(path)],
        }
