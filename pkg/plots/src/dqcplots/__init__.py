"""Figure rendering for dqcbench results CSVs."""
from .render import (CSV_COLUMNS, PlotSpec, SchemaError, STRATEGY_COLORS,
                     build_figure, load_rows, render, render_metric,
                     series_means, width_bin)

__version__ = "0.1.0"
