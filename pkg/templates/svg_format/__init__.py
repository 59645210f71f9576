"""SVG plot format package"""
from templates.svg_format.plot_template import PlotFormat

__all__ = ['PlotFormat']
