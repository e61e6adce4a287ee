"""
Disparate-treatment check by flipping the declared protected attribute.

Every row is scored twice with all other fields fixed, once with S forced to
1 and once with S forced to 0. Only the declared protected column is flipped;
a feature that merely copies S stays as it is.
"""

import logging
from typing import Any, Callable, Dict, Mapping, Optional

import numpy as np
import pandas as pd

from src.core.tracing import traced
from src.data.dataset import Dataset
from src.data.stratify import stratify
from src.model.logistic import score_frame
from src.schemas.counterfactual import FlipAuditResult
from src.schemas.dataset import Stratification
from src.schemas.model import LogisticModel

logger = logging.getLogger(__name__)

# (features, s vector) -> probability per row
DecisionFn = Callable[[pd.DataFrame, np.ndarray], np.ndarray]


def model_decision_fn(m: LogisticModel) -> DecisionFn:
    def fn(features: pd.DataFrame, s: np.ndarray) -> np.ndarray:
        return score_frame(m, features, s)

    return fn


def row_decision_fn(
    row_fn: Callable[[Mapping[str, Any]], float], protected_column: str, levels: tuple[str, str]
) -> DecisionFn:
    """Lift a per-row scorer (row mapping -> probability) to the batch signature."""

    def fn(features: pd.DataFrame, s: np.ndarray) -> np.ndarray:
        out = np.empty(len(features))
        records = features.to_dict(orient="records")
        for i, record in enumerate(records):
            record[protected_column] = levels[0] if s[i] == 1 else levels[1]
            out[i] = float(row_fn(record))
        return out

    return fn


def _weighted_mean(values: np.ndarray, w: np.ndarray) -> float:
    total = float(w.sum())
    return float((w * values).sum()) / total if total > 0.0 else 0.0


@traced("flip_audit")
def flip_audit(
    decision_fn: DecisionFn,
    d: Dataset,
    threshold: float = 0.5,
    spec: Optional[Stratification] = None,
    reverse: bool = False,
) -> FlipAuditResult:
    """
    Causal mean difference E[A | S<-1] - E[A | S<-0] over the rows of d, at
    decision and probability level. `reverse` swaps the two roles, which
    negates both values.
    """
    ones = np.ones(d.n, dtype=np.int8)
    zeros = np.zeros(d.n, dtype=np.int8)
    p_hi = np.asarray(decision_fn(d.features, ones), dtype=float)
    p_lo = np.asarray(decision_fn(d.features, zeros), dtype=float)
    if reverse:
        p_hi, p_lo = p_lo, p_hi
    a_diff = (p_hi >= threshold).astype(float) - (p_lo >= threshold).astype(float)
    p_diff = p_hi - p_lo
    w = d.weights

    per_partition: Optional[Dict[str, float]] = None
    partition_weights: Optional[Dict[str, float]] = None
    if spec is not None:
        per_partition, partition_weights = {}, {}
        total = float(w.sum())
        for st in stratify(d, spec):
            idx = st.indices
            per_partition[st.label] = _weighted_mean(a_diff[idx], w[idx])
            partition_weights[st.label] = float(w[idx].sum()) / total if total > 0.0 else 0.0

    result = FlipAuditResult(
        causal_mean_difference_decisions=_weighted_mean(a_diff, w),
        causal_mean_difference_probabilities=_weighted_mean(p_diff, w),
        per_partition=per_partition,
        partition_weights=partition_weights,
        rows_affected=int(np.count_nonzero(a_diff)),
        n=d.n,
        threshold=threshold,
    )
    logger.debug(
        "flip audit: decisions=%.6g probabilities=%.6g rows_affected=%d",
        result.causal_mean_difference_decisions,
        result.causal_mean_difference_probabilities,
        result.rows_affected,
    )
    return result
