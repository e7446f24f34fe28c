"""Figure rendering for quenchprobe CSV outputs."""

from .render import read_quenchprobe_csv, render
from .spec import FigureSpec, FigureSpecError, load_figure_spec, parse_figure_spec

__version__ = "0.1.0"
