"""Backend export package"""
from backend.export.csv_generator import TableGenerator, write_trajectory_csv
from backend.export.report_generator import JSONReportGenerator, dumps_report, to_jsonable
from backend.export.svg_generator import PlotSeries, SVGPlotGenerator, emit_svg_plot, render_svg

__all__ = [
    'JSONReportGenerator',
    'PlotSeries',
    'SVGPlotGenerator',
    'TableGenerator',
    'dumps_report',
    'emit_svg_plot',
    'render_svg',
    'to_jsonable',
    'write_trajectory_csv',
]
