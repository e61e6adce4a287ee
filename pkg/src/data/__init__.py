from src.data.dataset import WEIGHT_COLUMN, Dataset
from src.data.io import from_frame, load_csv, load_schema, write_csv
from src.data.split import split
from src.data.stratify import Stratum, stratify

__all__ = [
    "WEIGHT_COLUMN",
    "Dataset",
    "Stratum",
    "from_frame",
    "load_csv",
    "load_schema",
    "split",
    "stratify",
    "write_csv",
]
