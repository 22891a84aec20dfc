"""Figure rendering for the atom-cavity simulator's CSV time-series output."""

__version__ = "0.1.0"

from .render import PlotSpec, render  # noqa: F401
from .schema import SchemaError, SeriesFile  # noqa: F401
