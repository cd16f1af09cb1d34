"""Rendering layer for the detector-response figure CSV datasets.

Never recomputes physics: everything drawn comes from the CSV files
produced by the `udw` sweep and figure commands.
"""

__version__ = "0.1.0"

from .csv_io import Dataset, SchemaError, read_dataset
from .figures import FIGURE_IDS, ValidationError, render
