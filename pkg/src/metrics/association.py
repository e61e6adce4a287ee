"""
Proxy and support diagnostics.

feature_protected_correlation flags features that could carry the protected
attribute into a model (the redlining effect). support_report measures how
much data backs the protected group and its conjunctions with categorical
feature values.
"""

import itertools
import logging
from typing import Dict, List

import numpy as np
import pandas as pd
from scipy.stats import chi2_contingency

from src.core.errors import InvalidParamError
from src.data.dataset import Dataset
from src.schemas.metrics import MetricResult

logger = logging.getLogger(__name__)


def _weighted_pearson(x: np.ndarray, s: np.ndarray, w: np.ndarray) -> float | None:
    total = w.sum()
    mx = (w * x).sum() / total
    ms = (w * s).sum() / total
    var_x = (w * (x - mx) ** 2).sum()
    var_s = (w * (s - ms) ** 2).sum()
    if var_x <= 0.0 or var_s <= 0.0:
        return None
    return float((w * (x - mx) * (s - ms)).sum() / np.sqrt(var_x * var_s))


def _cramers_v(values: pd.Series, s: np.ndarray, w: np.ndarray) -> tuple[float | None, float]:
    table = (
        pd.DataFrame({"level": values.to_numpy(), "s": s, "w": w})
        .pivot_table(index="level", columns="s", values="w", aggfunc="sum", fill_value=0.0)
        .to_numpy(dtype=float)
    )
    table = table[table.sum(axis=1) > 0.0][:, table.sum(axis=0) > 0.0]
    if table.shape[0] < 2 or table.shape[1] < 2:
        return None, 0.0
    chi2 = float(chi2_contingency(table, correction=False)[0])
    k = min(table.shape) - 1
    return float(np.sqrt(chi2 / (table.sum() * k))), chi2


def feature_protected_correlation(d: Dataset) -> Dict[str, MetricResult]:
    """
    Association of every feature with S: absolute point-biserial correlation
    for numeric features, Cramer's V for categorical ones. Both lie in [0, 1].
    """
    s = d.s.astype(float)
    w = d.weights
    results: Dict[str, MetricResult] = {}
    for name in d.schema.feature_names:
        column = d.features[name]
        caveats: List[str] = []
        components: Dict[str, float] = {}
        value = 0.0
        if d.schema.kind_of(name) == "numeric":
            r = _weighted_pearson(column.to_numpy(dtype=float), s, w)
            method = "point_biserial"
            if r is not None:
                components["correlation"] = r
                value = min(1.0, abs(r))
        else:
            r, chi2 = _cramers_v(column.astype(str), d.s, w)
            method = "cramers_v"
            if r is not None:
                components["chi2"] = chi2
                value = min(1.0, r)
        if r is None:
            caveats.append(f"feature '{name}' is constant; association set to 0")
        results[name] = MetricResult(
            name=f"feature_protected_correlation[{name}]",
            value=value,
            components=components,
            group_sizes=d.group_sizes,
            caveats=caveats + [f"method: {method}"],
        )
    return results


def support_report(d: Dataset, conjunction_depth: int = 1) -> MetricResult:
    """
    P(S=1), P(S=0) and the share and row count of every conjunction of S=1 with
    up to `conjunction_depth` categorical feature values. Cells enumerate the
    cartesian product of observed levels, so empty conjunctions show up with
    share 0. The value is the smaller of the two group shares.
    """
    categorical = d.schema.categorical_features()
    if conjunction_depth < 0 or conjunction_depth > len(categorical):
        raise InvalidParamError(
            f"conjunction_depth {conjunction_depth} must be between 0 and the number of "
            f"categorical features ({len(categorical)})"
        )
    w = d.weights
    total = float(w.sum())
    protected = d.s == 1
    p1 = float(w[protected].sum()) / total
    p0 = float(w[~protected].sum()) / total
    components: Dict[str, float] = {"p_protected": p1, "p_favored": p0}

    levels = {c: sorted(set(d.features[c].astype(str).tolist())) for c in categorical}
    values = {c: d.features[c].astype(str).to_numpy() for c in categorical}
    shares: List[float] = []
    for depth in range(1, conjunction_depth + 1):
        for combo in itertools.combinations(categorical, depth):
            for cell in itertools.product(*(levels[c] for c in combo)):
                mask = protected.copy()
                for column, level in zip(combo, cell):
                    mask &= values[column] == level
                label = ",".join(f"{c}={v}" for c, v in zip(combo, cell))
                share = float(w[mask].sum()) / total
                components[f"share[S=1,{label}]"] = share
                components[f"count[S=1,{label}]"] = float(mask.sum())
                shares.append(share)
    if shares:
        components["min_conjunction_share"] = min(shares)
        components["conjunction_cells"] = float(len(shares))
    logger.debug("support: p1=%.4f, %d conjunction cells", p1, len(shares))
    return MetricResult(
        name="support_report",
        value=min(p1, p0),
        components=components,
        group_sizes=d.group_sizes,
    )
