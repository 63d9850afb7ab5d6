"""Figure rendering for dimerized-chain communication results, CSV in, PNG/SVG out."""

from .render import FigureSpec, render, render_all
from .schema import FIGURE_KINDS, SchemaError, load_table

__version__ = "0.1.0"
