import os
import sys

import pytest

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
SRC = os.path.join(ROOT, "src")

for p in (ROOT, SRC):
    if p not in sys.path:
        sys.path.insert(0, p)

from src.data.dataset import Dataset  # noqa: E402
from tests.helpers import build_dataset, cells  # noqa: E402


@pytest.fixture
def make_dataset():
    return build_dataset


@pytest.fixture
def twenty_rows() -> Dataset:
    """S=1: 10 rows with 2 positive; S=0: 10 rows with 6 positive; one numeric feature."""
    s, y = cells({(1, 1): 2, (1, 0): 8, (0, 1): 6, (0, 0): 4})
    return build_dataset(s, y, {"x": [float(i) for i in range(20)]})


@pytest.fixture
def simpson_rows() -> Dataset:
    """
    Stratum x=0: S1 8 rows / 2 positive, S0 4 rows / 1 positive.
    Stratum x=1: S1 4 rows / 3 positive, S0 8 rows / 6 positive.
    """
    s, y, x = [], [], []
    for stratum, groups in (("0", ((1, 8, 2), (0, 4, 1))), ("1", ((1, 4, 3), (0, 8, 6)))):
        for s_val, n, pos in groups:
            s += [s_val] * n
            y += [1] * pos + [0] * (n - pos)
            x += [stratum] * n
    return build_dataset(s, y, {"x": x})
