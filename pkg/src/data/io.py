"""
CSV and schema-document ingestion.

Every cell is read as text first so that missing values, protected/label
codes and numeric parse failures can be reported with the row and column
they occur in. Row numbers in errors count data rows from 1.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from src.core.errors import (
    EmptyGroupError,
    InvalidParamError,
    InvalidSchemaError,
    MissingColumnError,
    MissingValueError,
    NonBinaryLabelError,
    NonBinaryProtectedError,
    UnparsableCsvError,
    UnparsableNumericError,
)
from src.core.files import write_bytes_atomic
from src.data.dataset import WEIGHT_COLUMN, Dataset
from src.schemas.dataset import Schema

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def load_schema(path: PathLike) -> Schema:
    """Parse a schema JSON document."""
    try:
        return Schema.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except UnicodeDecodeError as exc:
        raise InvalidSchemaError(f"Schema document {path} is not UTF-8: {exc}") from exc
    except ValidationError as exc:
        raise InvalidSchemaError(f"Invalid schema document {path}: {exc}") from exc


def load_csv(path: PathLike, schema: Schema) -> Dataset:
    path = Path(path)
    try:
        frame = pd.read_csv(
            path,
            dtype=str,
            keep_default_na=False,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError as exc:
        raise MissingColumnError(schema.protected_column) from exc
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise UnparsableCsvError(str(path), str(exc).strip()) from exc
    dataset = from_frame(frame, schema)
    logger.debug(
        "loaded %s: n=%d n1=%d n0=%d", path, dataset.n, dataset.n_protected, dataset.n_favored
    )
    return dataset


def dataset_to_csv(dataset: Dataset) -> bytes:
    return dataset.to_frame().to_csv(index=False, lineterminator="\n").encode("utf-8")


def write_csv(dataset: Dataset, path: PathLike) -> Path:
    """Write declared and pass-through columns, plus `_weight` when weights are non-unit."""
    return write_bytes_atomic(path, dataset_to_csv(dataset))


# Parsing

def _text_column(frame: pd.DataFrame, column: str) -> np.ndarray:
    raw = frame[column]
    values = np.array(["" if pd.isna(v) else str(v).strip() for v in raw], dtype=object)
    empty = np.flatnonzero(values == "")
    if empty.size:
        raise MissingValueError(int(empty[0]) + 1, column)
    return values


def _numeric_column(frame: pd.DataFrame, column: str) -> np.ndarray:
    text = _text_column(frame, column)
    parsed = pd.to_numeric(pd.Series(text), errors="coerce").to_numpy(dtype=float)
    bad = np.flatnonzero(~np.isfinite(parsed))
    if bad.size:
        row = int(bad[0])
        raise UnparsableNumericError(row + 1, column, str(text[row]))
    return parsed


def _binary_levels(
    values: np.ndarray, designated: str, column: str, role: str
) -> Tuple[np.ndarray, Tuple[str, str]]:
    levels: List[str] = sorted(set(values.tolist()))
    others = [lvl for lvl in levels if lvl != designated]
    if len(others) > 1 or len(levels) > 2:
        listed = levels if designated in levels else [designated, *levels]
        if role == "Protected":
            raise NonBinaryProtectedError(column, listed)
        raise NonBinaryLabelError(column, listed, role=role)
    other = others[0] if others else f"not_{designated}"
    return (values == designated).astype(np.int8), (designated, other)


def from_frame(frame: pd.DataFrame, schema: Schema) -> Dataset:
    """Build a Dataset from a raw table, validating it against the schema."""
    declared = [schema.protected_column, schema.label_column, *schema.feature_names]
    if schema.decision is not None:
        declared.append(schema.decision.column)
    for column in declared:
        if column not in frame.columns:
            raise MissingColumnError(column)

    protected_text = _text_column(frame, schema.protected_column)
    s, protected_levels = _binary_levels(
        protected_text, schema.protected_value, schema.protected_column, "Protected"
    )
    if s.sum() == 0 or s.sum() == len(s):
        raise EmptyGroupError(
            f"Protected column '{schema.protected_column}' needs both groups; "
            f"found n1={int(s.sum())}, n0={int(len(s) - s.sum())}"
        )

    label_text = _text_column(frame, schema.label_column)
    y, label_levels = _binary_levels(
        label_text, schema.positive_label, schema.label_column, "Label"
    )

    decisions = None
    if schema.decision is not None:
        decision_text = _text_column(frame, schema.decision.column)
        decisions, _ = _binary_levels(
            decision_text, schema.decision.positive, schema.decision.column, "Decision"
        )

    columns: Dict[str, np.ndarray] = {}
    for feature in schema.features:
        if feature.kind == "numeric":
            columns[feature.name] = _numeric_column(frame, feature.name)
        else:
            columns[feature.name] = _text_column(frame, feature.name)
    # explicit index: a schema without features still needs n rows
    features = pd.DataFrame(
        columns, columns=schema.feature_names, index=pd.RangeIndex(len(frame))
    )

    weights = np.ones(len(frame), dtype=float)
    if WEIGHT_COLUMN in frame.columns:
        weights = _numeric_column(frame, WEIGHT_COLUMN)
        if (weights < 0).any():
            raise InvalidParamError(f"Column '{WEIGHT_COLUMN}' has negative weights")

    passthrough = [c for c in frame.columns if c not in declared and c != WEIGHT_COLUMN]
    extras = pd.DataFrame(
        {c: frame[c].astype(str).to_numpy() for c in passthrough}, columns=passthrough
    )

    return Dataset(
        schema=schema,
        features=features,
        s=s,
        y=y,
        weights=weights,
        protected_levels=protected_levels,
        label_levels=label_levels,
        decisions=decisions,
        extras=extras if passthrough else pd.DataFrame(),
    )


def schema_to_json(schema: Schema) -> str:
    return json.dumps(schema.model_dump(mode="json", exclude_none=True), indent=2, sort_keys=True)
