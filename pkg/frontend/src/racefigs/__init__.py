"""Figure reproduction for the Gaussian-prime race CSV outputs."""

__version__ = "0.1.0"

from .render import FigureJob, build_figure, render, render_figures

__all__ = ["FigureJob", "build_figure", "render", "render_figures"]
