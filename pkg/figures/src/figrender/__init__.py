"""Chart rendering for corrvote experiment CSVs (consumes only the CSV schema)."""

from .render import KINDS, PALETTE, FigureSpec, render
from .schema import REQUIRED_COLUMNS, ResultRow, SchemaError, load_rows, rules_in

__version__ = "0.1.0"

__all__ = [
    "KINDS",
    "PALETTE",
    "FigureSpec",
    "render",
    "REQUIRED_COLUMNS",
    "ResultRow",
    "SchemaError",
    "load_rows",
    "rules_in",
    "__version__",
]
