"""Batch figure rendering for lexsim aggregate CSV files."""

from .figures import (
    KINDS,
    FigureSpec,
    MissingConditionError,
    build_figure,
    load_aggregate,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "KINDS",
    "FigureSpec",
    "MissingConditionError",
    "build_figure",
    "load_aggregate",
    "render",
    "__version__",
]
