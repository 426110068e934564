"""Figure scripts over goldensdr benchmark CSVs and fit-result JSONs."""

from .figures import (
    FigureSpec,
    plot_accuracy_box,
    plot_mse_trace,
    plot_scaling_curve,
    read_csv_columns,
)

__all__ = [
    "FigureSpec",
    "plot_accuracy_box",
    "plot_mse_trace",
    "plot_scaling_curve",
    "read_csv_columns",
]
