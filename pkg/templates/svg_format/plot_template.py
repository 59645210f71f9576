"""
SVG Plot Format Specifications
"""


class PlotFormat:
    """Time-series figure layout (S and I against t)"""

    # Canvas settings (pixels)
    WIDTH = 840
    HEIGHT = 420

    # Margins
    MARGIN_TOP = 40
    MARGIN_BOTTOM = 50
    MARGIN_LEFT = 80
    MARGIN_RIGHT = 150

    # Plot area
    PLOT_WIDTH = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    PLOT_HEIGHT = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    # Font settings
    FONT_FAMILY = 'Times New Roman, serif'
    FONT_SIZE_TITLE = 15
    FONT_SIZE_LABEL = 13
    FONT_SIZE_TICK = 11
    FONT_SIZE_LEGEND = 12

    # Axes
    TICK_COUNT = 5
    TICK_LENGTH = 5
    AXIS_COLOR = '#000000'
    GRID_COLOR = '#dddddd'
    X_LABEL = 'Time'

    # Series
    LINE_WIDTH = 1.5
    BAND_OPACITY = 0.2
    MAX_POINTS = 2000
    PALETTE = {
        'S': '#1f77b4',
        'I': '#d62728',
        'C': '#2ca02c',
        'A': '#9467bd',
        'N': '#7f7f7f',
    }
    FALLBACK_COLORS = ['#ff7f0e', '#8c564b', '#e377c2', '#17becf']

    # Legend
    LEGEND_X = WIDTH - MARGIN_RIGHT + 15
    LEGEND_ROW_HEIGHT = 20
    LEGEND_SWATCH = 18

    @staticmethod
    def get_series_color(label: str, index: int) -> str:
        """Palette color for a compartment label, cycling fallbacks otherwise"""
        if label in PlotFormat.PALETTE:
            return PlotFormat.PALETTE[label]
        return PlotFormat.FALLBACK_COLORS[index % len(PlotFormat.FALLBACK_COLORS)]

    @staticmethod
    def get_text_style(size: int) -> str:
        """Inline style for SVG text"""
        return f'font-family:{PlotFormat.FONT_FAMILY};font-size:{size}px'
