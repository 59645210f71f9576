"""
Static SVG line plots, written without a plotting library
"""
import math
import os
from dataclasses import dataclass
from html import escape
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np

from backend.errors import DomainError, ExportError
from config import Config
from templates.svg_format.plot_template import PlotFormat

PREAMBLE = """\
<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">
<rect x="0" y="0" width="{width}" height="{height}" style="fill:#ffffff"/>
"""

POSTAMBLE = "</svg>\n"


@dataclass
class PlotSeries:
    """One line, optionally with a shaded band (e.g. a 95% quantile band)"""

    label: str
    times: np.ndarray
    values: np.ndarray
    band_low: Optional[np.ndarray] = None
    band_high: Optional[np.ndarray] = None
    color: Optional[str] = None


def nice_ticks(lo: float, hi: float, count: int = PlotFormat.TICK_COUNT) -> List[float]:
    """Round tick values covering [lo, hi]"""
    span = hi - lo
    raw = span / max(1, count)
    magnitude = 10.0 ** math.floor(math.log10(raw))
    step = next(m * magnitude for m in (1, 2, 2.5, 5, 10) if m * magnitude >= raw)
    first = math.ceil(lo / step) * step
    ticks = []
    k = 0
    while first + k * step <= hi + 1e-9 * span:
        ticks.append(first + k * step)
        k += 1
    return ticks


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _tick_label(x: float) -> str:
    return f"{x:.6g}"


def _thin(n: int) -> np.ndarray:
    """Indices keeping at most MAX_POINTS points, always including the last one"""
    if n <= PlotFormat.MAX_POINTS:
        return np.arange(n)
    stride = math.ceil(n / PlotFormat.MAX_POINTS)
    return np.unique(np.r_[np.arange(0, n, stride), n - 1])


class SVGPlotGenerator:
    """Render series against time into a self-contained SVG file"""

    def __init__(self, output_dir: str = None):
        self.output_dir = output_dir or Config.OUTPUT_DIR
        os.makedirs(self.output_dir, exist_ok=True)

    def generate(self, series: Sequence[PlotSeries], filename: str, title: str = "",
                 y_label: str = "Population") -> Path:
        return emit_svg_plot(series, Path(self.output_dir) / filename, title=title, y_label=y_label)


def render_svg(series: Sequence[PlotSeries], title: str = "", y_label: str = "Population") -> str:
    """SVG document text; identical input gives identical output"""
    if not series:
        raise DomainError("at least one series is required")
    grid = np.asarray(series[0].times, dtype=float)
    for s in series:
        if len(s.times) != len(grid) or not np.array_equal(np.asarray(s.times, dtype=float), grid):
            raise DomainError(f"series {s.label!r} is not on the shared time grid")
        if len(s.values) != len(grid):
            raise DomainError(f"series {s.label!r} has {len(s.values)} values for {len(grid)} times")
    if len(grid) < 2:
        raise DomainError("need at least two time points to plot")

    stacks = [np.asarray(s.values, dtype=float) for s in series]
    stacks += [np.asarray(b, dtype=float) for s in series for b in (s.band_low, s.band_high) if b is not None]
    y_lo = float(min(v.min() for v in stacks))
    y_hi = float(max(v.max() for v in stacks))
    if y_hi == y_lo:
        pad = abs(y_hi) * 0.05 or 1.0
        y_lo, y_hi = y_lo - pad, y_hi + pad
    x_lo, x_hi = float(grid[0]), float(grid[-1])

    left, top = PlotFormat.MARGIN_LEFT, PlotFormat.MARGIN_TOP
    width, height = PlotFormat.PLOT_WIDTH, PlotFormat.PLOT_HEIGHT

    def px(t):
        return left + (np.asarray(t) - x_lo) / (x_hi - x_lo) * width

    def py(y):
        return top + height - (np.asarray(y) - y_lo) / (y_hi - y_lo) * height

    out = [PREAMBLE.format(width=PlotFormat.WIDTH, height=PlotFormat.HEIGHT)]

    # grid lines and ticks
    for tick in nice_ticks(y_lo, y_hi):
        y = _fmt(float(py(tick)))
        out.append(f'<line x1="{left}" y1="{y}" x2="{left + width}" y2="{y}" '
                   f'style="stroke:{PlotFormat.GRID_COLOR};stroke-width:1"/>\n')
        out.append(f'<text x="{left - PlotFormat.TICK_LENGTH - 3}" y="{y}" text-anchor="end" '
                   f'dominant-baseline="middle" style="{PlotFormat.get_text_style(PlotFormat.FONT_SIZE_TICK)}">'
                   f'{_tick_label(tick)}</text>\n')
    for tick in nice_ticks(x_lo, x_hi):
        x = _fmt(float(px(tick)))
        out.append(f'<line x1="{x}" y1="{top + height}" x2="{x}" y2="{top + height + PlotFormat.TICK_LENGTH}" '
                   f'style="stroke:{PlotFormat.AXIS_COLOR};stroke-width:1"/>\n')
        out.append(f'<text x="{x}" y="{top + height + PlotFormat.TICK_LENGTH + 14}" text-anchor="middle" '
                   f'style="{PlotFormat.get_text_style(PlotFormat.FONT_SIZE_TICK)}">{_tick_label(tick)}</text>\n')

    # axes
    out.append(f'<polyline points="{left},{top} {left},{top + height} {left + width},{top + height}" '
               f'style="fill:none;stroke:{PlotFormat.AXIS_COLOR};stroke-width:1"/>\n')

    keep = _thin(len(grid))
    xs = px(grid[keep])
    for index, s in enumerate(series):
        color = s.color or PlotFormat.get_series_color(s.label, index)
        if s.band_low is not None and s.band_high is not None:
            upper = [f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, py(np.asarray(s.band_high)[keep]))]
            lower = [f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs[::-1], py(np.asarray(s.band_low)[keep])[::-1])]
            out.append(f'<polygon points="{" ".join(upper + lower)}" '
                       f'style="fill:{color};fill-opacity:{PlotFormat.BAND_OPACITY};stroke:none"/>\n')
        points = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, py(np.asarray(s.values, dtype=float)[keep])))
        out.append(f'<polyline points="{points}" '
                   f'style="fill:none;stroke:{color};stroke-width:{PlotFormat.LINE_WIDTH}"/>\n')

        row_y = top + 10 + index * PlotFormat.LEGEND_ROW_HEIGHT
        lx = PlotFormat.LEGEND_X
        out.append(f'<line x1="{lx}" y1="{row_y}" x2="{lx + PlotFormat.LEGEND_SWATCH}" y2="{row_y}" '
                   f'style="stroke:{color};stroke-width:3"/>\n')
        out.append(f'<text x="{lx + PlotFormat.LEGEND_SWATCH + 6}" y="{row_y}" dominant-baseline="middle" '
                   f'style="{PlotFormat.get_text_style(PlotFormat.FONT_SIZE_LEGEND)}">{escape(s.label)}</text>\n')

    # labels
    out.append(f'<text x="{left + width / 2:.1f}" y="{PlotFormat.HEIGHT - 8}" text-anchor="middle" '
               f'style="{PlotFormat.get_text_style(PlotFormat.FONT_SIZE_LABEL)}">{PlotFormat.X_LABEL}</text>\n')
    out.append(f'<text x="18" y="{top + height / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {top + height / 2:.1f})" '
               f'style="{PlotFormat.get_text_style(PlotFormat.FONT_SIZE_LABEL)}">{escape(y_label)}</text>\n')
    if title:
        out.append(f'<text x="{left + width / 2:.1f}" y="{top - 15}" text-anchor="middle" '
                   f'style="{PlotFormat.get_text_style(PlotFormat.FONT_SIZE_TITLE)}">{escape(title)}</text>\n')

    out.append(POSTAMBLE)
    return "".join(out)


def emit_svg_plot(series: Sequence[PlotSeries], path: Union[str, Path], title: str = "",
                  y_label: str = "Population") -> Path:
    """Write the rendered plot to path"""
    document = render_svg(series, title=title, y_label=y_label)
    path = Path(path)
    try:
        path.write_text(document, encoding="utf-8")
    except OSError as e:
        raise ExportError(path, e) from e
    return path
