import logging
from typing import List, Optional

import numpy as np

from src.data.dataset import Dataset
from src.metrics.difference import mean_difference, normalized_mean_difference
from src.model.logistic import decide_all, score
from src.schemas.model import ConfusionCounts, EvaluationRecord, GroupRates, LogisticModel

logger = logging.getLogger(__name__)


def _ratio(num: float, den: float) -> Optional[float]:
    return num / den if den > 0.0 else None


def confusion(a: np.ndarray, y: np.ndarray, w: np.ndarray) -> ConfusionCounts:
    return ConfusionCounts(
        tp=float(w[(a == 1) & (y == 1)].sum()),
        fp=float(w[(a == 1) & (y == 0)].sum()),
        tn=float(w[(a == 0) & (y == 0)].sum()),
        fn=float(w[(a == 0) & (y == 1)].sum()),
    )


def group_rates_for(
    a: np.ndarray, y: np.ndarray, w: np.ndarray, mask: np.ndarray, group: str, caveats: List[str]
) -> GroupRates:
    cm = confusion(a[mask], y[mask], w[mask])
    tpr = _ratio(cm.tp, cm.tp + cm.fn)
    fpr = _ratio(cm.fp, cm.fp + cm.tn)
    if tpr is None:
        caveats.append(f"{group} group has no positive labels; TPR absent")
    if fpr is None:
        caveats.append(f"{group} group has no negative labels; FPR absent")
    return GroupRates(
        tpr=tpr,
        fpr=fpr,
        acceptance_rate=_ratio(float((w[mask] * a[mask]).sum()), float(w[mask].sum())),
        size=int(mask.sum()),
    )


def evaluate_decisions(
    d: Dataset, a: np.ndarray, threshold: float, cost_fp: float = 1.0, cost_fn: float = 1.0
) -> EvaluationRecord:
    """Confusion, per-group rates and decision-level differences for decisions a."""
    y, w = d.y, d.weights
    total = float(w.sum())
    cm = confusion(a, y, w)
    caveats: List[str] = []
    precision = _ratio(cm.tp, cm.tp + cm.fp)
    recall = _ratio(cm.tp, cm.tp + cm.fn)
    if precision is None:
        caveats.append("no positive decisions; precision absent")
    if recall is None:
        caveats.append("no positive labels; recall absent")

    return EvaluationRecord(
        threshold=threshold,
        accuracy=(cm.tp + cm.tn) / total,
        confusion=cm,
        precision=precision,
        recall=recall,
        expected_cost=(cost_fp * cm.fp + cost_fn * cm.fn) / total,
        protected=group_rates_for(a, y, w, d.s == 1, "protected", caveats),
        favored=group_rates_for(a, y, w, d.s == 0, "favored", caveats),
        mean_difference=mean_difference(d, a),
        normalized_mean_difference=normalized_mean_difference(d, a),
        caveats=caveats,
    )


def evaluate(m: LogisticModel, d: Dataset, threshold: float = 0.5) -> EvaluationRecord:
    a = decide_all(score(m, d), threshold)
    record = evaluate_decisions(
        d, a, threshold, m.hyperparams.cost_fp, m.hyperparams.cost_fn
    )
    logger.debug("evaluated at threshold %.4g: accuracy=%.4f", threshold, record.accuracy)
    return record
