from typing import Any, List, Mapping

import numpy as np
import pandas as pd

from src.core.errors import MissingFeatureError, UnknownLevelError
from src.data.dataset import Dataset
from src.schemas.model import FeatureEncoding


def fit_encoding(d: Dataset, include_protected: bool = False) -> FeatureEncoding:
    """Training statistics for standardization plus sorted categorical levels."""
    numeric = {}
    categorical = {}
    for name in d.schema.feature_names:
        column = d.features[name]
        if d.schema.kind_of(name) == "numeric":
            values = column.to_numpy(dtype=float)
            mean = float(values.mean())
            std = float(values.std())
            numeric[name] = (mean, std if std > 0.0 else 1.0)
        else:
            categorical[name] = sorted(set(column.astype(str).tolist()))
    return FeatureEncoding(
        numeric=numeric,
        categorical=categorical,
        order=list(d.schema.feature_names),
        include_protected=include_protected,
        protected_column=d.schema.protected_column,
        protected_value=d.schema.protected_value,
    )


def encode_frame(enc: FeatureEncoding, features: pd.DataFrame, s: np.ndarray) -> np.ndarray:
    """Encoded design matrix (no intercept column) for a feature table and S vector."""
    n = len(features)
    blocks: List[np.ndarray] = []
    for name in enc.order:
        if name not in features.columns:
            raise MissingFeatureError(name)
        if name in enc.numeric:
            mean, std = enc.numeric[name]
            values = features[name].to_numpy(dtype=float)
            blocks.append(((values - mean) / std).reshape(n, 1))
        else:
            levels = enc.categorical[name]
            values = features[name].astype(str)
            codes = pd.Categorical(values, categories=levels).codes
            unknown = np.flatnonzero(codes < 0)
            if unknown.size:
                raise UnknownLevelError(name, str(values.iloc[int(unknown[0])]))
            blocks.append(np.eye(len(levels))[codes][:, 1:])
    if enc.include_protected:
        blocks.append(np.asarray(s, dtype=float).reshape(n, 1))
    if not blocks:
        return np.zeros((n, 0))
    return np.hstack(blocks)


def encode_row(enc: FeatureEncoding, row: Mapping[str, Any]) -> np.ndarray:
    values: List[float] = []
    for name in enc.order:
        if name not in row:
            raise MissingFeatureError(name)
        if name in enc.numeric:
            mean, std = enc.numeric[name]
            values.append((float(row[name]) - mean) / std)
        else:
            level = str(row[name])
            levels = enc.categorical[name]
            if level not in levels:
                raise UnknownLevelError(name, level)
            values.extend(1.0 if level == other else 0.0 for other in levels[1:])
    if enc.include_protected:
        if enc.protected_column not in row:
            raise MissingFeatureError(enc.protected_column)
        values.append(1.0 if str(row[enc.protected_column]) == enc.protected_value else 0.0)
    return np.asarray(values, dtype=float)
