import logging
import warnings
from typing import List

import numpy as np
import pandas as pd
import statsmodels.api as sm
from scipy import stats

from src.core.errors import RankDeficientDesignError
from src.data.dataset import Dataset, OutcomeSelector
from src.schemas.metrics import MetricResult

logger = logging.getLogger(__name__)

ALPHA = 0.05
INTERCEPT = "_intercept"
PROTECTED = "_protected"


def design_matrix(d: Dataset) -> pd.DataFrame:
    """Intercept, numeric features, one-hot categorical features (first level dropped), s."""
    parts: List[pd.DataFrame] = [pd.DataFrame({INTERCEPT: np.ones(d.n)})]
    for name in d.schema.feature_names:
        column = d.features[name]
        if d.schema.kind_of(name) == "numeric":
            parts.append(pd.DataFrame({name: column.to_numpy(dtype=float)}))
        else:
            dummies = pd.get_dummies(column.astype(str), prefix=name, prefix_sep="=", dtype=float)
            parts.append(dummies.iloc[:, 1:].reset_index(drop=True))
    parts.append(pd.DataFrame({PROTECTED: d.s.astype(float)}))
    return pd.concat(parts, axis=1)


def regression_test(d: Dataset, outcome: OutcomeSelector = "label") -> MetricResult:
    """
    Linear probability model A = alpha + beta.X + phi.S + e fitted by
    weighted least squares with classical standard errors; phi is tested
    with a two-sided normal-approximation p-value.
    """
    a = d.outcome(outcome).astype(float)
    X = design_matrix(d)
    rank = int(np.linalg.matrix_rank(X.to_numpy()))
    if rank < X.shape[1]:
        raise RankDeficientDesignError(
            f"design matrix has rank {rank} but {X.shape[1]} columns "
            "(a feature is constant or collinear with s)"
        )

    with warnings.catch_warnings(), np.errstate(divide="ignore", invalid="ignore"):
        warnings.simplefilter("ignore", RuntimeWarning)
        fit = sm.WLS(a, X, weights=d.weights).fit()

    phi = float(fit.params[PROTECTED])
    se = float(fit.bse[PROTECTED])
    components = {"phi": phi, "intercept": float(fit.params[INTERCEPT]), "alpha": ALPHA}
    caveats: List[str] = []
    if np.isfinite(se) and se > 1e-12 * max(1.0, abs(phi)):
        t = phi / se
        p_value = float(2.0 * stats.norm.sf(abs(t)))
        components.update({"std_error": se, "t": t})
    else:
        components["std_error"] = 0.0
        p_value = 0.0 if abs(phi) > 1e-12 else 1.0
        caveats.append("perfect fit: residual variance is zero, t statistic undefined")
    components["p_value"] = p_value
    components["significant"] = 1.0 if p_value < ALPHA else 0.0
    for name in X.columns[1:-1]:
        components[f"beta[{name}]"] = float(fit.params[name])

    logger.debug("regression test phi=%.6g p=%.4g", phi, p_value)
    return MetricResult(
        name="regression_test",
        value=phi,
        components=components,
        group_sizes=d.group_sizes,
        caveats=caveats,
    )
