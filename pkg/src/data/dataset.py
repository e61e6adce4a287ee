"""
Immutable tabular dataset with a declared binary protected attribute.

Vectors are numpy arrays flagged read-only after construction; feature values
live in a pandas DataFrame (floats for numeric columns, strings for
categorical columns). Derived datasets are built with `take`, `with_weights`
and `with_labels`, never by mutation.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any, Dict, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from src.core.errors import (
    EmptyGroupError,
    InvalidParamError,
    NonBinaryLabelError,
    UnknownColumnError,
)
from src.schemas.dataset import Schema

WEIGHT_COLUMN = "_weight"

OutcomeSelector = Union[Literal["label", "decision"], np.ndarray, Sequence[int]]


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.ascontiguousarray(values)
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class Dataset:
    schema: Schema
    features: pd.DataFrame
    s: np.ndarray
    y: np.ndarray
    weights: np.ndarray
    protected_levels: Tuple[str, str]
    label_levels: Tuple[str, str]
    decisions: Optional[np.ndarray] = None
    extras: pd.DataFrame = field(default_factory=pd.DataFrame)

    def __post_init__(self) -> None:
        n = len(self.s)
        if not len(self.features.columns) and len(self.features) != n:
            object.__setattr__(self, "features", pd.DataFrame(index=pd.RangeIndex(n)))
        vectors = {"y": self.y, "weights": self.weights}
        if self.decisions is not None:
            vectors["decisions"] = self.decisions
        for name, vec in vectors.items():
            if len(vec) != n:
                raise InvalidParamError(f"{name} has length {len(vec)}, expected {n}")
        if len(self.features) != n or (len(self.extras.columns) and len(self.extras) != n):
            raise InvalidParamError("feature table length does not match the row count")
        for name, vec in (("s", self.s), ("y", self.y), ("decisions", self.decisions)):
            if vec is not None and vec.size and not np.isin(vec, (0, 1)).all():
                raise InvalidParamError(f"{name} must contain only 0/1")
        w = np.asarray(self.weights, dtype=float)
        if w.size and (not np.isfinite(w).all() or (w < 0).any()):
            raise InvalidParamError("weights must be finite and non-negative")

        object.__setattr__(self, "s", _frozen(np.asarray(self.s, dtype=np.int8)))
        object.__setattr__(self, "y", _frozen(np.asarray(self.y, dtype=np.int8)))
        object.__setattr__(self, "weights", _frozen(w))
        if self.decisions is not None:
            object.__setattr__(
                self, "decisions", _frozen(np.asarray(self.decisions, dtype=np.int8))
            )
        object.__setattr__(self, "features", self.features.reset_index(drop=True))
        if len(self.extras.columns):
            object.__setattr__(self, "extras", self.extras.reset_index(drop=True))

    # Sizes

    @property
    def n(self) -> int:
        return int(self.s.shape[0])

    @property
    def n_protected(self) -> int:
        return int(self.s.sum())

    @property
    def n_favored(self) -> int:
        return self.n - self.n_protected

    @property
    def group_sizes(self) -> Tuple[int, int]:
        return self.n_protected, self.n_favored

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    def require_both_groups(self) -> None:
        if self.n_protected == 0 or self.n_favored == 0:
            raise EmptyGroupError(
                "both protected groups must be present "
                f"(n1={self.n_protected}, n0={self.n_favored})"
            )

    # Outcomes

    def outcome(self, selector: OutcomeSelector = "label") -> np.ndarray:
        """Resolve an outcome selector to a 0/1 vector of length n."""
        if isinstance(selector, str):
            if selector == "label":
                return self.y
            if selector == "decision":
                if self.decisions is None:
                    raise UnknownColumnError("decision")
                return self.decisions
            raise InvalidParamError(f"unknown outcome selector '{selector}'")
        vec = np.asarray(selector)
        if vec.shape != (self.n,):
            raise InvalidParamError(f"outcome vector has shape {vec.shape}, expected ({self.n},)")
        if not np.isin(vec, (0, 1)).all():
            raise InvalidParamError("outcome vector must contain only 0/1")
        return vec.astype(np.int8)

    def binary_extra(self, column: str, positive: str = "1") -> np.ndarray:
        """
        A pass-through column coded 1 where it equals `positive`. Besides
        `positive` the column may hold at most one other level.
        """
        if column not in self.extras.columns:
            raise UnknownColumnError(column)
        values = self.extras[column].astype(str).str.strip().to_numpy()
        levels = sorted(set(values.tolist()))
        if len([lvl for lvl in levels if lvl != positive]) > 1:
            listed = levels if positive in levels else [positive, *levels]
            raise NonBinaryLabelError(column, listed, role="Sub-target")
        return (values == positive).astype(np.int8)

    # Derivation

    def take(self, indices: Sequence[int] | np.ndarray) -> Dataset:
        idx = np.asarray(indices, dtype=np.intp)
        return Dataset(
            schema=self.schema,
            features=self.features.iloc[idx],
            s=self.s[idx],
            y=self.y[idx],
            weights=self.weights[idx],
            protected_levels=self.protected_levels,
            label_levels=self.label_levels,
            decisions=None if self.decisions is None else self.decisions[idx],
            extras=self.extras.iloc[idx] if len(self.extras.columns) else pd.DataFrame(),
        )

    def with_weights(self, weights: np.ndarray) -> Dataset:
        return self._replace(weights=np.asarray(weights, dtype=float))

    def with_labels(self, y: np.ndarray) -> Dataset:
        return self._replace(y=np.asarray(y))

    def with_decisions(self, decisions: np.ndarray) -> Dataset:
        return self._replace(decisions=np.asarray(decisions))

    def _replace(self, **changes: Any) -> Dataset:
        fields: Dict[str, Any] = {
            "schema": self.schema,
            "features": self.features,
            "s": self.s,
            "y": self.y,
            "weights": self.weights,
            "protected_levels": self.protected_levels,
            "label_levels": self.label_levels,
            "decisions": self.decisions,
            "extras": self.extras,
        }
        fields.update(changes)
        return Dataset(**fields)

    # Views

    def row(self, i: int) -> Dict[str, Any]:
        """Raw row as a mapping of column name to value, protected column included."""
        record: Dict[str, Any] = {
            name: self.features.iat[i, j] for j, name in enumerate(self.features.columns)
        }
        record[self.schema.protected_column] = self.protected_levels[1 - int(self.s[i])]
        return record

    def to_frame(self, include_weights: Optional[bool] = None) -> pd.DataFrame:
        """
        Raw table in declared column order: protected, label, decision,
        features, pass-through columns and `_weight` (written when any weight
        differs from 1, or when forced).
        """
        schema = self.schema
        protected_raw = np.where(self.s == 1, self.protected_levels[0], self.protected_levels[1])
        label_raw = np.where(self.y == 1, self.label_levels[0], self.label_levels[1])
        columns: Dict[str, Any] = {
            schema.protected_column: protected_raw,
            schema.label_column: label_raw,
        }
        if schema.decision is not None and self.decisions is not None:
            columns[schema.decision.column] = np.where(
                self.decisions == 1, schema.decision.positive, f"not_{schema.decision.positive}"
            )
        frame = pd.DataFrame(columns)
        for name in self.features.columns:
            frame[name] = self.features[name].to_numpy()
        for name in self.extras.columns:
            frame[name] = self.extras[name].to_numpy()
        if include_weights is None:
            include_weights = bool((self.weights != 1.0).any())
        if include_weights:
            frame[WEIGHT_COLUMN] = self.weights
        return frame

    def fingerprint(self) -> str:
        """Content hash over parsed values, weights and the schema."""
        digest = hashlib.sha256()
        digest.update(self.schema.model_dump_json().encode("utf-8"))
        digest.update(self.to_frame(include_weights=True).to_csv(index=False).encode("utf-8"))
        return digest.hexdigest()
