import logging

import numpy as np

from src.core.errors import InvalidParamError
from src.data.dataset import Dataset, OutcomeSelector
from src.data.stratify import bin_codes, stratify_codes
from src.metrics.difference import conditional_from_strata
from src.model.logistic import fit_logistic, score
from src.schemas.metrics import MetricResult
from src.schemas.model import Hyperparams

logger = logging.getLogger(__name__)

# scores are compared after rounding so that rows with identical features
# share a bin regardless of floating-point noise in the fit
SCORE_DECIMALS = 12


def propensity_scores(d: Dataset, h: Hyperparams | None = None) -> np.ndarray:
    """P(S=1 | X) from the internal logistic learner, S excluded from the inputs."""
    params = (h or Hyperparams()).model_copy(update={"include_protected": False, "fairness": 0.0})
    model = fit_logistic(d, params, target=d.s)
    return np.round(score(model, d), SCORE_DECIMALS)


def propensity_stratified_difference(
    d: Dataset, outcome: OutcomeSelector = "label", bins: int = 5
) -> MetricResult:
    """Mean difference conditioned on quantile strata of the propensity score."""
    if bins < 2:
        raise InvalidParamError(f"bins must be >= 2, got {bins}")
    if not d.schema.feature_names:
        raise InvalidParamError("propensity stratification needs at least one feature")

    a = d.outcome(outcome)
    scores = propensity_scores(d)
    codes, edges = bin_codes(scores, bins)
    strata = stratify_codes(d, codes, "propensity")
    result = conditional_from_strata(d, a, strata, name="propensity_stratified_difference")

    components = dict(result.components)
    components["bins"] = float(bins)
    for j, edge in enumerate(edges):
        components[f"edge[{j}]"] = float(edge)
    logger.debug("propensity strata: %d used of %d bins", len(strata), bins)
    return result.model_copy(update={"components": components})
