"""Figure regeneration for co-orbital pipeline CSV outputs.

Rendering never recomputes physics: every figure is a deterministic
function of its input CSVs.
"""

from .figures import FIGURE_IDS, FigureRecipe, render
from .schema import CsvTable, SchemaError, read_csv

__all__ = [
    "FIGURE_IDS",
    "FigureRecipe",
    "render",
    "CsvTable",
    "SchemaError",
    "read_csv",
]

__version__ = "0.1.0"
