"""Small dataset builders shared by the test suites."""

from typing import Dict, Optional, Sequence, Tuple

import pandas as pd

from src.data.dataset import WEIGHT_COLUMN, Dataset
from src.data.io import from_frame
from src.schemas.dataset import FeatureSpec, LabelSpec, ProtectedSpec, Schema


def build_dataset(
    s: Sequence[int],
    y: Sequence[int],
    features: Optional[Dict[str, Sequence]] = None,
    weights: Optional[Sequence[float]] = None,
    extras: Optional[Dict[str, Sequence]] = None,
) -> Dataset:
    """
    Dataset with protected column `group` ("B" is protected) and label
    `outcome` ("1" is positive). Features holding only numbers are numeric,
    anything else is categorical.
    """
    features = features or {}
    specs = []
    frame = pd.DataFrame(
        {
            "group": ["B" if v else "A" for v in s],
            "outcome": ["1" if v else "0" for v in y],
        }
    )
    for name, values in features.items():
        numeric = all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values)
        specs.append(FeatureSpec(name=name, kind="numeric" if numeric else "categorical"))
        frame[name] = [str(v) for v in values]
    for name, values in (extras or {}).items():
        frame[name] = [str(v) for v in values]
    if weights is not None:
        frame[WEIGHT_COLUMN] = [repr(float(w)) for w in weights]
    schema = Schema(
        protected=ProtectedSpec(column="group", value="B"),
        label=LabelSpec(column="outcome", positive="1"),
        features=specs,
    )
    return from_frame(frame, schema)


def cells(counts: Dict[Tuple[int, int], int]) -> Tuple[list, list]:
    """Expand {(s, y): count} into parallel s and y lists, cells in sorted order."""
    s: list = []
    y: list = []
    for (s_val, y_val), count in sorted(counts.items()):
        s.extend([s_val] * count)
        y.extend([y_val] * count)
    return s, y
