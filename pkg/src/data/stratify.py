"""
Partition rows into strata of similar non-protected characteristics.

Exact strategy groups rows by the tuple of column values. Quantile strategy
bins each numeric column at empirical quantiles (a value equal to an edge
goes to the lower bin) and groups by the tuple of bin codes. Columns with no
more distinct values than bins keep one bin per value.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from src.core.errors import NonNumericQuantileColumnError, UnknownColumnError
from src.data.dataset import Dataset
from src.schemas.dataset import Stratification

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Stratum:
    key: Tuple[object, ...]
    label: str
    indices: np.ndarray

    @property
    def size(self) -> int:
        return int(self.indices.size)


def quantile_edges(values: np.ndarray, bins: int) -> np.ndarray:
    """Inner bin edges; empty when each distinct value gets its own bin."""
    distinct = np.unique(values)
    if distinct.size <= bins:
        return np.empty(0)
    return np.unique(np.quantile(values, np.arange(1, bins) / bins))


def bin_codes(values: np.ndarray, bins: int) -> Tuple[np.ndarray, np.ndarray]:
    """Bin code per value and the edges used (distinct values when no edges apply)."""
    edges = quantile_edges(values, bins)
    if edges.size == 0:
        distinct = np.unique(values)
        return np.searchsorted(distinct, values), distinct
    return np.searchsorted(edges, values, side="left"), edges


def _check_partition(strata: Sequence[Stratum], n: int) -> None:
    if not strata:
        if n:
            raise RuntimeError("stratification produced no strata for a non-empty dataset")
        return
    merged = np.concatenate([st.indices for st in strata])
    if merged.size != n or np.unique(merged).size != n:
        raise RuntimeError("strata do not partition the row indices")


def group_rows(columns: pd.DataFrame) -> List[Tuple[Tuple[object, ...], np.ndarray]]:
    """Row indices per distinct value tuple, keys in sorted order."""
    names = list(columns.columns)
    grouped = columns.groupby(names, sort=True).indices
    out = []
    for key, idx in grouped.items():
        key_tuple = key if isinstance(key, tuple) else (key,)
        out.append((key_tuple, np.sort(np.asarray(idx, dtype=np.intp))))
    out.sort(key=lambda item: item[0])
    return out


def _format(names: Sequence[str], key: Tuple[object, ...], prefix: str = "") -> str:
    return ",".join(f"{name}={prefix}{value}" for name, value in zip(names, key))


def stratify(d: Dataset, spec: Stratification) -> List[Stratum]:
    for column in spec.columns:
        if column not in d.features.columns:
            raise UnknownColumnError(column)

    if spec.strategy == "exact":
        groups = group_rows(d.features[spec.columns])
        strata = [Stratum(key, _format(spec.columns, key), idx) for key, idx in groups]
    else:
        bins = int(spec.bins or 2)
        codes: Dict[str, np.ndarray] = {}
        for column in spec.columns:
            if d.schema.kind_of(column) != "numeric":
                raise NonNumericQuantileColumnError(column)
            codes[column], _ = bin_codes(d.features[column].to_numpy(dtype=float), bins)
        groups = group_rows(pd.DataFrame(codes, columns=spec.columns))
        strata = [
            Stratum(tuple(int(k) for k in key), _format(spec.columns, key, "q"), idx)
            for key, idx in groups
        ]

    _check_partition(strata, d.n)
    logger.debug("stratified n=%d into %d strata (%s)", d.n, len(strata), spec.strategy)
    return strata


def stratify_codes(d: Dataset, codes: np.ndarray, name: str) -> List[Stratum]:
    """Strata from a precomputed integer code per row (used for propensity bins)."""
    groups = group_rows(pd.DataFrame({name: codes}))
    strata = [Stratum(key, _format([name], key, "q"), idx) for key, idx in groups]
    _check_partition(strata, d.n)
    return strata
