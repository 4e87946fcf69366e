"""Static figure rendering for rwl experiment CSV/JSON outputs."""

from .render import render
from .spec import KINDS, PlotSpec, SchemaMismatch

__version__ = "0.1.0"
