"""Static figure rendering for qwalk CLI outputs."""

from .render import FIGURES, FigureSpec, InputError, render

__version__ = "0.1.0"
