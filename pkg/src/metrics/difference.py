"""
Mean-difference family of discrimination measures.

All differences follow the order E[outcome | S=1] - E[outcome | S=0], so a
negative value means the protected group receives the positive outcome less
often. Rates are weight-aware throughout.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.core.errors import AllStrataSkippedError, EmptyGroupError
from src.data.dataset import Dataset, OutcomeSelector
from src.data.stratify import Stratum, stratify
from src.schemas.dataset import Stratification
from src.schemas.metrics import MetricResult

logger = logging.getLogger(__name__)

RECONSTRUCTION_NOTE = (
    "explained/unexplained split is a reconstruction: explained = sum over strata of "
    "(P(i|S=1) - P(i|S=0)) * mean of the two group rates in stratum i"
)


def group_rates(a: np.ndarray, s: np.ndarray, w: np.ndarray) -> Tuple[float, float, float, float]:
    """(p1, p0, W1, W0): weighted positive rates and total weights per group."""
    protected = s == 1
    w1 = w[protected]
    w0 = w[~protected]
    total1 = float(w1.sum())
    total0 = float(w0.sum())
    if total1 <= 0.0 or total0 <= 0.0:
        raise EmptyGroupError(
            f"both groups need positive weight (protected={total1}, favored={total0})"
        )
    p1 = float((w1 * a[protected]).sum()) / total1
    p0 = float((w0 * a[~protected]).sum()) / total0
    return p1, p0, total1, total0


def _sizes(s: np.ndarray) -> Tuple[int, int]:
    n1 = int(s.sum())
    return n1, int(s.size - n1)


def mean_difference(d: Dataset, outcome: OutcomeSelector = "label") -> MetricResult:
    a = d.outcome(outcome)
    p1, p0, w1, w0 = group_rates(a, d.s, d.weights)
    return MetricResult(
        name="mean_difference",
        value=p1 - p0,
        components={"p1": p1, "p0": p0, "weight_protected": w1, "weight_favored": w0},
        group_sizes=d.group_sizes,
    )


def normalization_constant(a: np.ndarray, s: np.ndarray, w: np.ndarray) -> float:
    """C = min(P(A=1)/P(S=0), P(A=0)/P(S=1)) from weighted marginals."""
    total = float(w.sum())
    p_a1 = float((w * a).sum()) / total
    p_a0 = float((w * (1 - a)).sum()) / total
    p_s1 = float(w[s == 1].sum()) / total
    p_s0 = float(w[s == 0].sum()) / total
    return min(p_a1 / p_s0, p_a0 / p_s1)


def normalized_mean_difference(d: Dataset, outcome: OutcomeSelector = "label") -> MetricResult:
    a = d.outcome(outcome)
    p1, p0, _, _ = group_rates(a, d.s, d.weights)
    md = p1 - p0
    c = normalization_constant(a, d.s, d.weights)
    components = {"p1": p1, "p0": p0, "mean_difference": md, "C": c}
    caveats: List[str] = []
    value: Optional[float] = None
    if c > 0.0:
        value = md / c
    else:
        caveats.append("normalization constant C is 0 (outcome is constant); value omitted")
    return MetricResult(
        name="normalized_mean_difference",
        value=value,
        components=components,
        group_sizes=d.group_sizes,
        caveats=caveats,
    )


def _stratum_rates(
    a: np.ndarray, d: Dataset, strata: Sequence[Stratum]
) -> Tuple[List[Tuple[Stratum, float, float, float, float]], List[str]]:
    included = []
    skipped: List[str] = []
    for st in strata:
        idx = st.indices
        try:
            p1, p0, w1, w0 = group_rates(a[idx], d.s[idx], d.weights[idx])
        except EmptyGroupError:
            skipped.append(st.label)
            continue
        included.append((st, p1, p0, w1, w0))
    if skipped:
        logger.debug("skipped %d strata missing a group: %s", len(skipped), skipped)
    if not included:
        raise AllStrataSkippedError(
            f"every one of {len(strata)} strata lacks one of the protected groups"
        )
    return included, skipped


def _skip_caveat(skipped: Sequence[str]) -> List[str]:
    if not skipped:
        return []
    return [f"skipped {len(skipped)} stratum/strata missing a group: {', '.join(skipped)}"]


def conditional_from_strata(
    d: Dataset, a: np.ndarray, strata: Sequence[Stratum], name: str = "conditional_mean_difference"
) -> MetricResult:
    included, skipped = _stratum_rates(a, d, strata)
    total_weight = 0.0
    for _, _, _, w1, w0 in included:
        total_weight += w1 + w0

    components: Dict[str, float] = {}
    value = 0.0
    for st, p1, p0, w1, w0 in included:
        share = (w1 + w0) / total_weight
        md = p1 - p0
        value += share * md
        components[f"md[{st.label}]"] = md
        components[f"weight[{st.label}]"] = share

    p1_all, p0_all, _, _ = group_rates(a, d.s, d.weights)
    components["p1"] = p1_all
    components["p0"] = p0_all
    components["strata_used"] = float(len(included))
    components["strata_skipped"] = float(len(skipped))
    return MetricResult(
        name=name,
        value=value,
        components=components,
        group_sizes=d.group_sizes,
        caveats=_skip_caveat(skipped),
    )


def conditional_mean_difference(
    d: Dataset, outcome: OutcomeSelector, spec: Stratification
) -> MetricResult:
    """Weighted average of per-stratum mean differences over strata holding both groups."""
    return conditional_from_strata(d, d.outcome(outcome), stratify(d, spec))


def unexplained_difference(
    d: Dataset, outcome: OutcomeSelector, spec: Stratification
) -> MetricResult:
    """
    Split the raw mean difference into a part explained by the strata
    composition of each group and an unexplained remainder.

    Stratum membership shares P(i|S) are taken over the full group totals;
    strata missing a group are skipped and reported in caveats.
    """
    a = d.outcome(outcome)
    strata = stratify(d, spec)
    p1, p0, total1, total0 = group_rates(a, d.s, d.weights)
    included, skipped = _stratum_rates(a, d, strata)

    total = p1 - p0
    explained = 0.0
    components: Dict[str, float] = {}
    for st, sp1, sp0, w1, w0 in included:
        p_star = (sp1 + sp0) / 2.0
        contribution = (w1 / total1 - w0 / total0) * p_star
        explained += contribution
        components[f"explained[{st.label}]"] = contribution
    unexplained = total - explained

    components.update(
        {"total": total, "explained": explained, "unexplained": unexplained, "p1": p1, "p0": p0}
    )
    return MetricResult(
        name="unexplained_difference",
        value=unexplained,
        components=components,
        group_sizes=d.group_sizes,
        caveats=[RECONSTRUCTION_NOTE, *_skip_caveat(skipped)],
    )
