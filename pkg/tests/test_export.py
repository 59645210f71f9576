import json
import re

import numpy as np
import pandas as pd
import pytest

from backend.errors import DomainError, ExportError
from backend.export import (
    JSONReportGenerator,
    PlotSeries,
    SVGPlotGenerator,
    TableGenerator,
    dumps_report,
    render_svg,
    to_jsonable,
    write_trajectory_csv,
)
from backend.export.svg_generator import nice_ticks
from backend.integrator import Trajectory


@pytest.fixture
def trajectory():
    return Trajectory.from_arrays([0.0, 0.5, 1.0], [[800, 1, 0, 0], [799.5, 1.25, 0.1, 0.01], [799, 1.5, 0.2, 0.02]])


class TestTrajectoryCsv:
    def test_header_and_rows(self, trajectory, tmp_path):
        path = write_trajectory_csv(trajectory, tmp_path / "traj.csv")
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "t,S,I,C,A,N"
        assert lines[1] == "0,800,1,0,0,801"
        assert len(lines) == 4

    def test_full_precision(self, tmp_path):
        traj = Trajectory.from_arrays([0.0, 0.1], [[1 / 3, 0, 0, 0], [2 / 3, 0, 0, 0]])
        frame = pd.read_csv(write_trajectory_csv(traj, tmp_path / "p.csv"))
        assert frame['S'].iloc[0] == 1 / 3
        assert frame['t'].iloc[1] == 0.1

    def test_total_column_is_sum(self, trajectory, tmp_path):
        frame = pd.read_csv(write_trajectory_csv(trajectory, tmp_path / "traj.csv"))
        assert np.allclose(frame['N'], frame[['S', 'I', 'C', 'A']].sum(axis=1))

    def test_empty_trajectory(self, tmp_path):
        with pytest.raises(DomainError):
            write_trajectory_csv(Trajectory.from_arrays([], np.zeros((0, 4))), tmp_path / "e.csv")

    def test_unwritable_path(self, trajectory, tmp_path):
        with pytest.raises(ExportError):
            write_trajectory_csv(trajectory, tmp_path / "missing" / "traj.csv")


class TestTableGenerator:
    def test_json_tables(self, trajectory, tmp_path):
        path = TableGenerator(str(tmp_path), fmt="json").generate_trajectory(trajectory, "traj")
        assert path.name == "traj.json"
        columns = json.loads(path.read_text(encoding="utf-8"))
        assert list(columns) == ['t', 'S', 'I', 'C', 'A', 'N']
        assert columns['I'] == [1.0, 1.25, 1.5]

    def test_stats_csv(self, tmp_path):
        frame = pd.DataFrame({'t': [0.0, 1.0], 'mean_S': [1.0, 2.0]})
        path = TableGenerator(str(tmp_path)).generate_stats(frame, "stats")
        assert path.read_text(encoding="utf-8") == "t,mean_S\n0,1\n1,2\n"

    def test_unknown_format(self, trajectory, tmp_path):
        with pytest.raises(DomainError):
            TableGenerator(str(tmp_path), fmt="xlsx").generate_trajectory(trajectory)


class TestJsonReport:
    def test_non_finite_markers(self):
        assert to_jsonable({'a': float('inf'), 'b': -np.inf, 'c': np.nan}) == {'a': 'inf', 'b': '-inf', 'c': 'nan'}

    def test_numpy_values(self):
        assert to_jsonable({'n': np.int64(3), 'x': np.float64(0.5), 'ok': np.bool_(True),
                            'v': np.array([1.0, 2.0])}) == {'n': 3, 'x': 0.5, 'ok': True, 'v': [1.0, 2.0]}

    def test_sorted_and_stable(self):
        text = dumps_report({'b': 1, 'a': {'y': 2, 'x': 1}})
        assert text == dumps_report({'a': {'x': 1, 'y': 2}, 'b': 1})
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("}\n")

    def test_generate(self, tmp_path):
        path = JSONReportGenerator(str(tmp_path)).generate({'ext_lhs': float('inf')}, "r.json")
        assert json.loads(path.read_text(encoding="utf-8")) == {'ext_lhs': 'inf'}


def _series_polylines(svg: str):
    return re.findall(r'<polyline points="([^"]+)" style="fill:none;stroke:#[0-9a-f]{6};stroke-width:1.5"', svg)


class TestSvg:
    def test_identical_input_identical_output(self):
        t = np.linspace(0, 10, 101)
        series = [PlotSeries('S', t, 800 - t), PlotSeries('I', t, np.exp(-t))]
        assert render_svg(series, title="run") == render_svg(series, title="run")

    def test_constant_series_is_flat(self):
        t = np.linspace(0, 10, 11)
        svg = render_svg([PlotSeries('I', t, np.full(11, 3.0))])
        (points,) = _series_polylines(svg)
        ys = {pair.split(',')[1] for pair in points.split()}
        assert len(ys) == 1

    def test_band_is_drawn(self):
        t = np.linspace(0, 1, 5)
        svg = render_svg([PlotSeries('mean S', t, t, band_low=t - 0.1, band_high=t + 0.1)])
        assert '<polygon' in svg
        assert 'mean S' in svg

    def test_mismatched_grids(self):
        with pytest.raises(DomainError):
            render_svg([PlotSeries('S', np.arange(3.0), np.ones(3)), PlotSeries('I', np.arange(4.0), np.ones(4))])

    def test_needs_a_series(self):
        with pytest.raises(DomainError):
            render_svg([])

    def test_thinned_to_max_points(self):
        t = np.linspace(0, 1, 10_001)
        (points,) = _series_polylines(render_svg([PlotSeries('S', t, t)]))
        assert len(points.split()) <= 2001

    def test_generator_writes_file(self, tmp_path):
        t = np.linspace(0, 1, 3)
        path = SVGPlotGenerator(str(tmp_path)).generate([PlotSeries('S', t, t)], "p.svg")
        assert path.read_text(encoding="utf-8").startswith("<?xml")


def test_nice_ticks():
    assert nice_ticks(0.0, 500.0) == [0.0, 100.0, 200.0, 300.0, 400.0, 500.0]
    assert nice_ticks(0.0, 1.0) == pytest.approx([0.0, 0.2, 0.4, 0.6, 0.8, 1.0])
