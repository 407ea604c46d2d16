"""Figure rendering for the surface-assisted downlink toolkit's CSV output."""

__version__ = "0.1.0"

from .render import (
    EmptyInput,
    FigureSpec,
    PlotError,
    SchemaMismatch,
    render,
)

__all__ = [
    "EmptyInput",
    "FigureSpec",
    "PlotError",
    "SchemaMismatch",
    "render",
    "__version__",
]
