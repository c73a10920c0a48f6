"""Figure rendering for drivenlattice simulation outputs."""

__version__ = "0.1.0"

from .render import PlotJob, SchemaError, render  # noqa: F401
