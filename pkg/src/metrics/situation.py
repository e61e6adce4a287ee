"""
k-NN situation testing.

For each protected row with a negative outcome, compare the positive
fraction among its k nearest favored-group neighbours with the positive
fraction among its k nearest protected neighbours (itself excluded).
Distance is Gower-style: numeric features scaled by their range and
compared by absolute difference, categorical features contribute a 0/1
mismatch, and the total is the mean over features. Ties go to the lower
row index.
"""

import logging
from typing import Tuple

import numpy as np
import pandas as pd
from scipy.spatial.distance import cdist

from src.core.config import settings
from src.core.errors import InsufficientNeighborsError, InvalidParamError
from src.data.dataset import Dataset, OutcomeSelector
from src.schemas.metrics import MetricResult

logger = logging.getLogger(__name__)


def gower_blocks(d: Dataset) -> Tuple[np.ndarray, np.ndarray]:
    """Range-scaled numeric matrix and integer-coded categorical matrix."""
    numeric = d.schema.numeric_features()
    categorical = d.schema.categorical_features()
    num = np.zeros((d.n, 0))
    if numeric:
        num = d.features[numeric].to_numpy(dtype=float)
        span = num.max(axis=0) - num.min(axis=0)
        span[span == 0.0] = 1.0
        num = (num - num.min(axis=0)) / span
    cat = np.zeros((d.n, 0))
    if categorical:
        cat = np.column_stack(
            [pd.factorize(d.features[c].astype(str), sort=True)[0] for c in categorical]
        ).astype(float)
    return num, cat


def gower_distance(
    q_num: np.ndarray, q_cat: np.ndarray, r_num: np.ndarray, r_cat: np.ndarray
) -> np.ndarray:
    n_features = q_num.shape[1] + q_cat.shape[1]
    dist = np.zeros((q_num.shape[0], r_num.shape[0]))
    if n_features == 0:
        return dist
    if q_num.shape[1]:
        dist += cdist(q_num, r_num, metric="cityblock")
    if q_cat.shape[1]:
        dist += cdist(q_cat, r_cat, metric="hamming") * q_cat.shape[1]
    return dist / n_features


def _neighbour_fraction(
    dist: np.ndarray, candidates: np.ndarray, a: np.ndarray, w: np.ndarray, k: int
) -> np.ndarray:
    nearest = np.argsort(dist, axis=1, kind="stable")[:, :k]
    idx = candidates[nearest]
    weights = w[idx]
    positives = (weights * a[idx]).sum(axis=1)
    mass = weights.sum(axis=1)
    unweighted = a[idx].mean(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(mass > 0.0, positives / np.where(mass > 0.0, mass, 1.0), unweighted)


def knn_situation_test(
    d: Dataset, outcome: OutcomeSelector = "label", k: int = 10, t: float = 0.3
) -> MetricResult:
    if k < 1:
        raise InvalidParamError(f"k must be >= 1, got {k}")
    if not 0.0 <= t <= 1.0:
        raise InvalidParamError(f"t must be in [0, 1], got {t}")
    a = d.outcome(outcome).astype(float)
    w = d.weights
    protected = np.flatnonzero(d.s == 1)
    favored = np.flatnonzero(d.s == 0)
    if protected.size < k + 1 or favored.size < k:
        raise InsufficientNeighborsError(
            f"k={k} needs at least {k + 1} protected and {k} favored rows "
            f"(have {protected.size} and {favored.size})"
        )

    queries = protected[a[protected] == 0]
    base = {"k": float(k), "t": t, "test_population": float(queries.size)}
    if queries.size == 0:
        return MetricResult(
            name="knn_situation_test",
            value=0.0,
            components={**base, "mean_diff": 0.0, "flagged": 0.0},
            group_sizes=d.group_sizes,
            caveats=["no test population: the protected group has no negative outcomes"],
        )

    num, cat = gower_blocks(d)
    diffs = np.empty(queries.size)
    chunk = max(1, settings.knn_chunk_size)
    for start in range(0, queries.size, chunk):
        q = queries[start : start + chunk]
        d_fav = gower_distance(num[q], cat[q], num[favored], cat[favored])
        d_prot = gower_distance(num[q], cat[q], num[protected], cat[protected])
        # exclude each query row from its own protected neighbourhood
        self_pos = np.searchsorted(protected, q)
        d_prot[np.arange(q.size), self_pos] = np.inf
        frac_fav = _neighbour_fraction(d_fav, favored, a, w, k)
        frac_prot = _neighbour_fraction(d_prot, protected, a, w, k)
        diffs[start : start + q.size] = frac_fav - frac_prot

    flagged = diffs >= t
    qw = w[queries]
    if qw.sum() > 0.0:
        value = float((qw * flagged).sum() / qw.sum())
        mean_diff = float((qw * diffs).sum() / qw.sum())
    else:
        value = float(flagged.mean())
        mean_diff = float(diffs.mean())
    logger.debug(
        "situation test: %d of %d protected negatives flagged", int(flagged.sum()), queries.size
    )
    return MetricResult(
        name="knn_situation_test",
        value=value,
        components={**base, "mean_diff": mean_diff, "flagged": float(flagged.sum())},
        group_sizes=d.group_sizes,
    )
