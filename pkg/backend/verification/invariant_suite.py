"""
Invariant Suite - built-in checks behind the `verify` command

Each check returns a CheckResult; the suite prints a PASS/FAIL table and the
CLI exits non-zero when any check fails.
"""
import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from backend.analysis import convergence_order, lyapunov_estimate, martingale_diagnostic, relative_gap, time_average
from backend.integrator import GridSpec, Trajectory, exact_linear_ca, simulate, simulate_ode, simulate_paths
from backend.model import LevyMeasure, SicaParams, compute_thresholds, dt_safe, population_envelope
from backend.noise import RngStream
from config import Config

if TYPE_CHECKING:
    from backend.experiments.run_config import RunConfig

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-12
REGION_TOL = 1e-3
EM_RK4_TOL = 5e-3
ORACLE_TOL = 1e-9
QV_REL_TOL = 1e-6


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


class InvariantSuite:
    """Numerical invariants of the model, integrator and random streams for one config"""

    def __init__(self, config: "RunConfig", seed: Optional[int] = None,
                 samples: int = Config.VERIFY_SAMPLES, t_end: float = Config.VERIFY_T_END):
        self.config = config
        self.seed = config.seed if seed is None else seed
        self.samples = samples
        self.t_end = min(t_end, config.grid.t_end)
        self._reference: Optional[Trajectory] = None

    # ------------------------------------------------------------------
    # shared runs
    # ------------------------------------------------------------------

    @property
    def reference_dt(self) -> float:
        """Config step size, reduced to dt_safe when it exceeds the heuristic"""
        return min(self.config.grid.dt, dt_safe(self.config.params), self.t_end)

    def reference_run(self) -> Trajectory:
        """One stochastic path over the verify horizon, started from the config's initial state"""
        if self._reference is None:
            grid = GridSpec(t_end=self.t_end, dt=self.reference_dt, record_every=self.config.grid.record_every)
            self._reference = simulate(self.config.initial_state, self.config.params, self.config.levy,
                                       grid, RngStream(self.seed, 0))
        return self._reference

    def _deterministic_params(self) -> SicaParams:
        return self.config.params.model_copy(update={'sigma': 0.0})

    # ------------------------------------------------------------------
    # checks
    # ------------------------------------------------------------------

    def check_noise_cancellation(self) -> CheckResult:
        residual = self.reference_run().diagnostics.max_balance_residual
        return CheckResult(
            "noise cancellation",
            residual <= RESIDUAL_TOL,
            f"max |dN - dt(L - mu N - d A)| / max(1, N) = {residual:.3e} (tol {RESIDUAL_TOL:g})",
        )

    def check_population_bounds(self) -> CheckResult:
        traj = self.reference_run()
        p = self.config.params
        n = traj.column('N')
        n0 = float(n[0])
        lower_env, upper_env = np.array([population_envelope(n0, p, float(t)) for t in traj.times]).T
        in_region = (n >= p.n_lower * (1 - REGION_TOL)) & (n <= p.n_upper * (1 + REGION_TOL))
        in_envelope = (n >= lower_env * (1 - REGION_TOL)) & (n <= upper_env * (1 + REGION_TOL))
        start_inside = p.n_lower <= n0 <= p.n_upper
        passed = bool(in_envelope.all() and (in_region.all() or not start_inside))
        return CheckResult(
            "population bounds",
            passed,
            f"N in [{n.min():.6g}, {n.max():.6g}], region [{p.n_lower:.6g}, {p.n_upper:.6g}], "
            f"{int((~in_envelope).sum())} points outside the envelope",
        )

    def check_positivity(self) -> CheckResult:
        diag = self.reference_run().diagnostics
        return CheckResult(
            "positivity at dt_safe",
            diag.clamp_count == 0 and diag.jump_overflow_count == 0,
            f"dt={self.reference_dt:.3g}, clamps={diag.clamp_count}, jump overflows={diag.jump_overflow_count}",
        )

    def check_martingale_bound(self) -> CheckResult:
        traj = self.reference_run()
        report = martingale_diagnostic(traj, self.config.params, rel_tol=QV_REL_TOL)
        passed = report.within_bound or not report.stayed_in_region
        return CheckResult(
            "quadratic variation bound",
            passed,
            f"<M>_T/T = {report.qv_over_t_final:.6g} <= {report.qv_bound:.6g}"
            + ("" if report.stayed_in_region else " (path left the region, not asserted)"),
        )

    def _em_vs_rk4(self, dt: float) -> float:
        p = self._deterministic_params()
        record_every = max(1, round(1.0 / dt))
        grid = GridSpec(t_end=self.t_end, dt=dt, record_every=record_every)
        initial = self.config.initial_state.as_array()[None, :]
        em = simulate_paths(initial, p, LevyMeasure(), grid, [RngStream(self.seed, 0)])[0]
        reference = simulate_ode(self.config.initial_state, p,
                                 GridSpec(t_end=self.t_end, dt=1e-3, record_every=1000))
        return relative_gap(em, reference)

    def check_deterministic_limit(self) -> CheckResult:
        gaps = [self._em_vs_rk4(dt) for dt in (4e-3, 2e-3, 1e-3)]
        slope, r2 = convergence_order([4e-3, 2e-3, 1e-3], gaps)
        passed = gaps[-1] <= EM_RK4_TOL and slope > 0.8 and r2 >= 0.99
        return CheckResult(
            "sigma=0 EM vs RK4",
            passed,
            f"gap at dt=1e-3 {gaps[-1]:.3e} (tol {EM_RK4_TOL:g}), order {slope:.3f}, R^2 {r2:.4f}",
        )

    def check_linear_oracle(self) -> CheckResult:
        p = self.config.params
        i_const, c0, a0 = 5.0, 2.0, 1.0

        def rows(_t, y):
            return [p.phi * i_const - (p.omega + p.mu) * y[0],
                    p.rho * i_const - (p.alpha + p.mu + p.d) * y[1]]

        errors = []
        for t in (0.5, 5.0, 50.0):
            numeric = solve_ivp(rows, (0.0, t), [c0, a0], method="DOP853", rtol=1e-13, atol=1e-13).y[:, -1]
            exact = np.array(exact_linear_ca(i_const, c0, a0, p, t))
            errors.append(float(np.max(np.abs(exact - numeric) / np.maximum(1.0, np.abs(numeric)))))
        # semigroup: solving to t1 and then on to t1 + t2 equals solving to t1 + t2
        c1, a1 = exact_linear_ca(i_const, c0, a0, p, 3.0)
        split = np.array(exact_linear_ca(i_const, c1, a1, p, 4.0))
        whole = np.array(exact_linear_ca(i_const, c0, a0, p, 7.0))
        errors.append(float(np.max(np.abs(split - whole))))
        worst = max(errors)
        return CheckResult("linear C/A oracle", worst <= ORACLE_TOL, f"max error {worst:.3e}")

    def check_estimator_oracles(self) -> CheckResult:
        t = np.linspace(0.0, 10.0, 10_001)
        decay = np.exp(-t)
        zeros = np.zeros_like(t)
        traj = Trajectory.from_arrays(t, np.column_stack([decay, decay, zeros, zeros]))
        average_error = abs(time_average(traj, 'S')[-1] - (1 - math.exp(-10)) / 10)

        t = np.linspace(0.0, 40.0, 401)
        traj = Trajectory.from_arrays(t, np.column_stack([np.ones_like(t), np.exp(-0.5 * t),
                                                          np.zeros_like(t), np.zeros_like(t)]))
        slope_error = abs(lyapunov_estimate(traj).lyapunov_slope + 0.5)
        return CheckResult(
            "estimator oracles",
            average_error <= 1e-6 and slope_error <= 1e-6,
            f"time average error {average_error:.2e}, Lyapunov slope error {slope_error:.2e}",
        )

    def check_rng_moments(self) -> CheckResult:
        n = self.samples
        stream = RngStream(self.seed, 2 ** 32)
        gauss = stream.gaussian_block(0.01, n)
        counts = stream.poisson_block(0.5, n).astype(float)
        levy = LevyMeasure.of((1e-6, 1.0), (2e-6, 2.0), (3e-6, 3.0), (4e-6, 4.0))
        marks = stream.categorical(levy, n)
        freq = np.bincount(marks, minlength=len(levy.marks)) / n
        expected = levy.rates / levy.total_rate

        failures = []
        if abs(gauss.mean()) > 4e-4:
            failures.append(f"gaussian mean {gauss.mean():.2e}")
        if abs(gauss.var() / 0.01 - 1) > 0.01:
            failures.append(f"gaussian variance {gauss.var():.5f}")
        if abs(counts.mean() / 0.5 - 1) > 0.01:
            failures.append(f"poisson mean {counts.mean():.5f}")
        if abs(counts.var() / 0.5 - 1) > 0.02:
            failures.append(f"poisson variance {counts.var():.5f}")
        if np.any(np.abs(freq / expected - 1) > 0.01):
            failures.append(f"mark frequencies {np.round(freq, 5).tolist()}")
        return CheckResult("rng moments", not failures, "; ".join(failures) or f"{n} samples per law")

    def check_threshold_monotonicity(self) -> CheckResult:
        p = self.config.params
        base = max(p.sigma, 1e-6)
        reports = [compute_thresholds(p.model_copy(update={'sigma': base * f}), self.config.levy)
                   for f in (0.5, 1.0, 2.0)]
        ext = [r.ext_lhs for r in reports]
        pers = [r.pers_rhs for r in reports]
        passed = (
            ext[0] > ext[1] > ext[2]
            and pers[0] < pers[1] < pers[2]
            and all(r.n_lower <= r.n_upper for r in reports)
        )
        return CheckResult("threshold monotonicity in sigma", passed,
                           f"ext_lhs {ext[0]:.4g} > {ext[2]:.4g}, pers_rhs {pers[0]:.4g} < {pers[2]:.4g}")

    def check_replay(self) -> CheckResult:
        p, levy = self.config.params, self.config.levy
        grid = GridSpec(t_end=min(self.t_end, 1.0), dt=min(self.reference_dt, 1e-3), record_every=10)
        initial = self.config.initial_state
        first = simulate(initial, p, levy, grid, RngStream(self.seed, 2))
        second = simulate(initial, p, levy, grid, RngStream(self.seed, 2))
        batch = simulate_paths(np.repeat(initial.as_array()[None, :], 3, axis=0), p, levy, grid,
                               [RngStream(self.seed, k) for k in range(3)])
        same = np.array_equal(first.states, second.states)
        matches_batch = np.array_equal(first.states, batch[2].states)
        return CheckResult("replay determinism", same and matches_batch,
                           f"repeat identical={same}, equals path 2 of a 3-path batch={matches_batch}")

    # ------------------------------------------------------------------

    def checks(self) -> List[Tuple[str, Callable[[], CheckResult]]]:
        return [
            ("noise cancellation", self.check_noise_cancellation),
            ("population bounds", self.check_population_bounds),
            ("positivity at dt_safe", self.check_positivity),
            ("quadratic variation bound", self.check_martingale_bound),
            ("sigma=0 EM vs RK4", self.check_deterministic_limit),
            ("linear C/A oracle", self.check_linear_oracle),
            ("estimator oracles", self.check_estimator_oracles),
            ("rng moments", self.check_rng_moments),
            ("threshold monotonicity in sigma", self.check_threshold_monotonicity),
            ("replay determinism", self.check_replay),
        ]

    def run(self, progress_callback: Optional[Callable[[int, str], None]] = None) -> List[CheckResult]:
        results = []
        checks = self.checks()
        for k, (name, check) in enumerate(checks):
            if progress_callback:
                progress_callback(int(100 * k / len(checks)), f"Checking {name}...")
            try:
                results.append(check())
            except Exception as e:
                logger.exception("verify check %s raised", name)
                results.append(CheckResult(name, False, f"error: {e}"))
        return results


def format_table(results: List[CheckResult]) -> str:
    """Framed PASS/FAIL table with a pass count"""
    lines = ["=" * 60, "Verify Summary", "=" * 60]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name:34} {status}")
        if r.detail:
            lines.append(f"    {r.detail}")
    lines.append("=" * 60)
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines)
