"""
Post-processing mitigation: per-group decision thresholds chosen on a
holdout set by exhaustive grid search.
"""

import logging
from typing import Tuple

import numpy as np

from src.core.errors import InvalidParamError, MissingPositivesError
from src.data.dataset import Dataset
from src.model.logistic import score
from src.schemas.metrics import MetricResult
from src.schemas.mitigation import FairnessTarget, MitigationRecord, ThresholdPair
from src.schemas.model import LogisticModel

logger = logging.getLogger(__name__)

# accuracies closer than this are treated as tied
ACCURACY_TIE = 1e-12


def threshold_grid(step: float) -> np.ndarray:
    """{0, step, 2*step, ...} up to and including 1."""
    if not 0.0 < step <= 0.5:
        raise InvalidParamError(f"grid_step must be in (0, 0.5], got {step}")
    count = int(np.floor(1.0 / step + 1e-9))
    grid = np.round(np.arange(count + 1) * step, 12)
    if grid[-1] < 1.0:
        grid = np.append(grid, 1.0)
    return grid


def _group_curves(
    p: np.ndarray, y: np.ndarray, w: np.ndarray, grid: np.ndarray, target: FairnessTarget
) -> Tuple[np.ndarray, np.ndarray]:
    """Disparity rate and weighted correct count per threshold for one group."""
    accept = p[None, :] >= grid[:, None]
    if target == "demographic_parity":
        rate = (accept @ w) / w.sum()
    else:
        positives = y == 1
        rate = (accept[:, positives] @ w[positives]) / w[positives].sum()
    correct = (accept == (y == 1)[None, :]) @ w
    return rate, correct


def _disparity_metric(name: str, value: float, d: Dataset, t1: float, t0: float) -> MetricResult:
    return MetricResult(
        name=name,
        value=value,
        components={"protected_threshold": t1, "favored_threshold": t0},
        group_sizes=d.group_sizes,
    )


def group_thresholds(
    m: LogisticModel,
    holdout: Dataset,
    target: FairnessTarget = "demographic_parity",
    epsilon: float = 0.02,
    grid_step: float = 0.01,
    base_threshold: float = 0.5,
) -> Tuple[ThresholdPair, MitigationRecord]:
    """
    Search (theta_1, theta_0) over the grid for the most accurate pair whose
    disparity (acceptance-rate gap or TPR gap) is within epsilon. Ties go to
    the smaller |theta_1 - theta_0|, then the lower theta_1, then the lower
    theta_0. When nothing is feasible the minimal-disparity pair is returned
    with the infeasible flag set.
    """
    if epsilon < 0.0:
        raise InvalidParamError(f"epsilon must be >= 0, got {epsilon}")
    holdout.require_both_groups()
    grid = threshold_grid(grid_step)
    p = score(m, holdout)
    y, w = holdout.y, holdout.weights
    g1, g0 = holdout.s == 1, holdout.s == 0
    if target == "equal_opportunity":
        for name, mask in (("protected", g1), ("favored", g0)):
            if w[mask & (y == 1)].sum() <= 0.0:
                raise MissingPositivesError(f"{name} group has no positive labels in the holdout")

    rate1, correct1 = _group_curves(p[g1], y[g1], w[g1], grid, target)
    rate0, correct0 = _group_curves(p[g0], y[g0], w[g0], grid, target)
    total = float(w.sum())

    disparity = rate1[:, None] - rate0[None, :]
    accuracy = (correct1[:, None] + correct0[None, :]) / total
    t1 = np.broadcast_to(grid[:, None], disparity.shape).ravel()
    t0 = np.broadcast_to(grid[None, :], disparity.shape).ravel()
    gap = np.abs(t1 - t0)
    acc = accuracy.ravel()
    disp = np.abs(disparity).ravel()

    feasible = disp <= epsilon + 1e-12
    infeasible = not feasible.any()
    if infeasible:
        best_disp = disp.min()
        candidates = np.flatnonzero(disp <= best_disp + 1e-12)
        logger.warning("no threshold pair meets epsilon=%g; returning minimal disparity", epsilon)
    else:
        candidates = np.flatnonzero(feasible)
    best_acc = acc[candidates].max()
    candidates = candidates[acc[candidates] >= best_acc - ACCURACY_TIE]
    order = np.lexsort((t0[candidates], t1[candidates], gap[candidates]))
    chosen = int(candidates[order[0]])

    i, j = np.unravel_index(chosen, disparity.shape)
    pair = ThresholdPair(
        protected_threshold=float(grid[i]),
        favored_threshold=float(grid[j]),
        target=target,
        epsilon=epsilon,
        achieved_disparity=float(disparity[i, j]),
        achieved_accuracy=float(accuracy[i, j]),
        infeasible=infeasible,
    )

    changed = int(
        np.count_nonzero(
            apply_group_thresholds(p, holdout.s, pair) != (p >= base_threshold).astype(np.int8)
        )
    )
    base = np.array([base_threshold])
    base_rate1, _ = _group_curves(p[g1], y[g1], w[g1], base, target)
    base_rate0, _ = _group_curves(p[g0], y[g0], w[g0], base, target)
    metric = f"{target}_gap"
    record = MitigationRecord(
        method="post:thresholds",
        parameters={
            "target": target,
            "epsilon": epsilon,
            "grid_step": grid_step,
            "base_threshold": base_threshold,
            "protected_threshold": pair.protected_threshold,
            "favored_threshold": pair.favored_threshold,
            "infeasible": infeasible,
        },
        before=_disparity_metric(
            metric, float(base_rate1[0] - base_rate0[0]), holdout, base_threshold, base_threshold
        ),
        after=_disparity_metric(
            metric, pair.achieved_disparity, holdout, pair.protected_threshold,
            pair.favored_threshold,
        ),
        changed=changed,
    )
    logger.debug(
        "group thresholds: theta1=%.4g theta0=%.4g disparity=%.4g accuracy=%.4f",
        pair.protected_threshold,
        pair.favored_threshold,
        pair.achieved_disparity,
        pair.achieved_accuracy,
    )
    return pair, record


def apply_group_thresholds(p: np.ndarray, s: np.ndarray, pair: ThresholdPair) -> np.ndarray:
    thresholds = np.where(s == 1, pair.protected_threshold, pair.favored_threshold)
    return (p >= thresholds).astype(np.int8)
