"""
Pre-processing mitigation: change the training data so that labels become
independent of the protected attribute before any model sees them.
"""

import logging
from typing import Dict, Optional, Tuple

import numpy as np

from src.core.errors import EmptyCellError, NotEnoughCandidatesError
from src.data.dataset import Dataset
from src.data.split import CELLS
from src.metrics.difference import mean_difference
from src.model.logistic import fit_logistic, score
from src.schemas.mitigation import MitigationRecord
from src.schemas.model import Hyperparams, LogisticModel

logger = logging.getLogger(__name__)


def _cell_masks(d: Dataset) -> Dict[Tuple[int, int], np.ndarray]:
    masks = {}
    for s_val, y_val in CELLS:
        mask = (d.s == s_val) & (d.y == y_val)
        if not mask.any() or d.weights[mask].sum() <= 0.0:
            raise EmptyCellError(s_val, y_val)
        masks[(s_val, y_val)] = mask
    return masks


def independence_multipliers(d: Dataset) -> Dict[Tuple[int, int], float]:
    """w(s, y) = P(S=s) P(Y=y) / P(S=s, Y=y) from weighted marginals."""
    masks = _cell_masks(d)
    w = d.weights
    total = float(w.sum())
    p_s = {v: float(w[d.s == v].sum()) / total for v in (0, 1)}
    p_y = {v: float(w[d.y == v].sum()) / total for v in (0, 1)}
    return {
        cell: p_s[cell[0]] * p_y[cell[1]] / (float(w[mask].sum()) / total)
        for cell, mask in masks.items()
    }


def reweight(d: Dataset) -> Tuple[Dataset, MitigationRecord]:
    before = mean_difference(d, "label")
    multipliers = independence_multipliers(d)
    factor = np.ones(d.n)
    for (s_val, y_val), value in multipliers.items():
        factor[(d.s == s_val) & (d.y == y_val)] = value
    out = d.with_weights(d.weights * factor)
    record = MitigationRecord(
        method="pre:reweight",
        parameters={f"w(s={s},y={y})": v for (s, y), v in multipliers.items()},
        before=before,
        after=mean_difference(out, "label"),
        changed=int(np.count_nonzero(factor != 1.0)),
    )
    logger.debug("reweight multipliers: %s", record.parameters)
    return out, record


def resample(d: Dataset, seed: int = 0) -> Tuple[Dataset, MitigationRecord]:
    """
    Resample each (s, y) cell with replacement to round(n * P(s) * P(y)) rows,
    drawing rows in proportion to their weight. Output weights are all 1.
    """
    before = mean_difference(d, "label")
    masks = _cell_masks(d)
    w = d.weights
    total = float(w.sum())
    p_s = {v: float(w[d.s == v].sum()) / total for v in (0, 1)}
    p_y = {v: float(w[d.y == v].sum()) / total for v in (0, 1)}

    rng = np.random.default_rng(seed)
    parts = []
    expected_counts: Dict[str, int] = {}
    moved = 0
    for cell in CELLS:
        rows = np.flatnonzero(masks[cell])
        target = int(np.floor(d.n * p_s[cell[0]] * p_y[cell[1]] + 0.5))
        probs = w[rows] / w[rows].sum()
        parts.append(rng.choice(rows, size=target, replace=True, p=probs))
        expected_counts[f"n(s={cell[0]},y={cell[1]})"] = target
        moved += abs(target - rows.size)

    chosen = np.sort(np.concatenate(parts))
    out = d.take(chosen)
    out = out.with_weights(np.ones(out.n))
    out.require_both_groups()
    return out, MitigationRecord(
        method="pre:resample",
        parameters={"expected_counts": expected_counts, "n_out": int(out.n)},
        before=before,
        after=mean_difference(out, "label"),
        changed=moved,
        seed=seed,
    )


def massage_count(n_low: int, pos_low: int, n_high: int, pos_high: int) -> int:
    """
    Pairs to flip so that the two positive rates meet: the ceiling of
    (n_low * pos_high - n_high * pos_low) / (n_low + n_high), backed off by
    one when that leaves a smaller residual gap.
    """
    numerator = n_low * pos_high - n_high * pos_low
    if numerator <= 0:
        return 0
    denominator = n_low + n_high
    pairs = -(-numerator // denominator)

    def residual(k: int) -> float:
        # |rate_low - rate_high| after k swaps, kept as an exact integer ratio
        return abs((pos_low + k) * n_high - (pos_high - k) * n_low) / (n_low * n_high)

    if pairs > 0 and residual(pairs - 1) < residual(pairs):
        pairs -= 1
    return pairs


def massage(
    d: Dataset, ranker: Optional[LogisticModel] = None
) -> Tuple[Dataset, MitigationRecord]:
    """
    Relabel borderline rows: promote the highest-scored negatives of the
    disadvantaged group and demote the lowest-scored positives of the other
    group, in equal numbers. Equal scores are ordered by row index.
    """
    before = mean_difference(d, "label")
    protected = d.s == 1
    n1, n0 = int(protected.sum()), int((~protected).sum())
    pos1, pos0 = int(d.y[protected].sum()), int(d.y[~protected].sum())

    # compare pos1/n1 with pos0/n0 without rounding
    if pos1 * n0 <= pos0 * n1:
        low, high = protected, ~protected
        pairs = massage_count(n1, pos1, n0, pos0)
        promoted_group = "protected"
    else:
        low, high = ~protected, protected
        pairs = massage_count(n0, pos0, n1, pos1)
        promoted_group = "favored"

    if pairs == 0:
        return d, MitigationRecord(
            method="pre:massage",
            parameters={"pairs": 0, "promoted_group": promoted_group, "ranker": "none"},
            before=before,
            after=before,
            changed=0,
        )

    promotable = np.flatnonzero(low & (d.y == 0))
    demotable = np.flatnonzero(high & (d.y == 1))
    if promotable.size < pairs or demotable.size < pairs:
        raise NotEnoughCandidatesError(
            f"massaging needs {pairs} promotable and {pairs} demotable rows, "
            f"found {promotable.size} and {demotable.size}"
        )

    ranker_kind = "supplied"
    if ranker is None:
        ranker = fit_logistic(d, Hyperparams(fairness=0.0, include_protected=False))
        ranker_kind = "internal"
    scores = score(ranker, d)

    promote = promotable[np.lexsort((promotable, -scores[promotable]))[:pairs]]
    demote = demotable[np.lexsort((demotable, scores[demotable]))[:pairs]]
    y = d.y.copy()
    y[promote] = 1
    y[demote] = 0
    out = d.with_labels(y)
    logger.debug("massaged %d pairs (promoted group: %s)", pairs, promoted_group)
    return out, MitigationRecord(
        method="pre:massage",
        parameters={"pairs": pairs, "promoted_group": promoted_group, "ranker": ranker_kind},
        before=before,
        after=mean_difference(out, "label"),
        changed=2 * pairs,
    )
