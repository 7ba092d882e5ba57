"""Figure regeneration for cascade experiment CSVs."""

from .render import (
    KINDS,
    SCHEMAS,
    FigureSpec,
    SchemaError,
    discover_inputs,
    read_harness_csv,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "KINDS",
    "SCHEMAS",
    "FigureSpec",
    "SchemaError",
    "discover_inputs",
    "read_harness_csv",
    "render",
    "__version__",
]
