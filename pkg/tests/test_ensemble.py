import logging

import numpy as np
import pytest

from backend.analysis import EnsembleStats, ensemble_run
from backend.experiments import parse_run_config
from backend.integrator import simulate
from backend.noise import RngStream


def _override(config, **changes):
    data = config.to_dict()
    data.update(changes)
    return parse_run_config(data)


class TestEnsembleStats:
    def test_single_path_has_zero_variance(self, small_config):
        result = ensemble_run(_override(small_config, path_count=1))
        stats = result.stats
        assert stats.path_count == 1
        assert not stats.variance.any()
        assert np.array_equal(stats.q025, stats.mean)
        assert np.array_equal(stats.q975, stats.mean)

    def test_noise_free_paths_coincide(self, small_config):
        params = small_config.to_dict()['params'] | {'sigma': 0.0}
        config = _override(small_config, params=params, levy={'marks': []})
        result = ensemble_run(config)
        assert not result.stats.variance.any()
        first = result.trajectories[0].states
        assert all(np.array_equal(traj.states, first) for traj in result.trajectories)

    def test_quantiles_are_ordered(self, small_config):
        stats = ensemble_run(small_config).stats
        assert np.all(stats.q025 <= stats.q50)
        assert np.all(stats.q50 <= stats.q975)

    def test_frame_layout(self, small_config):
        frame = ensemble_run(small_config).stats.to_frame()
        assert frame.columns[0] == 't'
        assert {'mean_I', 'var_I', 'q025_C', 'q50_S', 'q975_A'} <= set(frame.columns)
        assert len(frame.columns) == 1 + 4 * 5

    def test_from_trajectories_matches_numpy(self, small_config):
        result = ensemble_run(small_config)
        stacked = np.stack([traj.states for traj in result.trajectories])
        stats = EnsembleStats.from_trajectories(result.trajectories)
        assert np.array_equal(stats.mean, stacked.mean(axis=0))
        assert np.allclose(stats.q50, np.median(stacked, axis=0), rtol=1e-14, atol=0)


class TestEnsembleRun:
    def test_bit_reproducible_across_worker_counts(self, small_config):
        one = ensemble_run(small_config, max_workers=1)
        three = ensemble_run(small_config, max_workers=3)
        assert np.array_equal(one.stats.mean, three.stats.mean)
        assert np.array_equal(one.stats.variance, three.stats.variance)
        assert one.verdict_summary() == three.verdict_summary()

    def test_path_k_is_simulate_with_stream_k(self, small_config):
        result = ensemble_run(small_config, max_workers=2)
        single = simulate(small_config.initial_state, small_config.params, small_config.levy,
                          small_config.grid, RngStream(small_config.seed, 2))
        assert np.array_equal(result.trajectories[2].states, single.states)

    def test_seed_override(self, small_config):
        a = ensemble_run(small_config, seed=1)
        b = ensemble_run(small_config, seed=2)
        assert a.seed == 1
        assert not np.array_equal(a.stats.mean, b.stats.mean)

    def test_progress_reaches_completion(self, small_config):
        seen = []
        ensemble_run(small_config, max_workers=2, progress_callback=lambda pct, msg: seen.append(pct))
        assert max(seen) == 100
        assert all(0 <= pct <= 100 for pct in seen)

    def test_trajectories_can_be_dropped(self, small_config):
        result = ensemble_run(small_config, keep_trajectories=False)
        assert result.trajectories == []
        assert result.path_count == 4

    def test_warns_once_about_run_conditions(self, small_config, caplog):
        config = _override(small_config, initial={'s': 900.0, 'i': 0.0, 'c': 0.0, 'a': 0.0})
        with caplog.at_level(logging.WARNING, logger="backend.integrator.euler_maruyama"):
            ensemble_run(config)
        messages = [r.getMessage() for r in caplog.records if r.name == "backend.integrator.euler_maruyama"]
        assert sum("outside the feasible region" in m for m in messages) == 1
        assert sum("dt_safe" in m for m in messages) == 1

    def test_verdict_summary(self, small_config):
        summary = ensemble_run(small_config).verdict_summary()
        assert summary['path_count'] == 4
        assert summary['seed'] == small_config.seed
        assert summary['max_balance_residual'] <= 1e-12
        assert summary['persistence_informational']
        assert 0.0 <= summary['extinction_rate'] <= 1.0
        assert summary['thresholds']['extinction_holds']


@pytest.mark.slow
def test_extinction_regime(fig1_config_data):
    data = dict(fig1_config_data)
    data['grid'] = dict(data['grid'], dt=1e-3)
    config = parse_run_config(data)
    result = ensemble_run(config)

    assert result.extinction_rate >= 0.95
    slopes = [v.lyapunov_slope for v in result.extinction if v is not None]
    assert sum(s < 0 for s in slopes) >= 95
    tail = result.stats.times >= 0.5 * config.grid.t_end
    assert result.stats.mean[tail, 0].mean() == pytest.approx(800.0, rel=0.05)
    assert result.max_balance_residual <= 1e-12
    for report in result.martingale:
        if report.stayed_in_region:
            assert report.qv_over_t_final <= 64.0 * (1 + 1e-6)


@pytest.mark.slow
def test_persistence_regime(fig2_config_data):
    config = parse_run_config(fig2_config_data)
    result = ensemble_run(config)
    p = config.params

    assert result.persistence_i_rate >= 0.95
    assert result.persistence_s_rate >= 0.95
    assert result.total_clamps == 0
    assert result.total_jump_overflows == 0
    assert result.max_balance_residual <= 1e-12
    for traj in result.trajectories:
        n = traj.column('N')
        assert n.min() >= p.n_lower * 0.999
        assert n.max() <= p.n_upper * 1.001
