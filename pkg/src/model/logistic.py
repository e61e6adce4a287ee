"""
Deterministic fairness-regularized logistic regression.

Loss minimised by full-batch gradient descent from all-zero parameters:

    L = sum(w_i c_i nll_i) / sum(w_i c_i) + l2 * ||beta||^2 + eta * (pbar_1 - pbar_0)^2

where c_i is cost_fn for positive rows and cost_fp for negative rows and
pbar_s is the weighted mean predicted probability of group s. The bias is
not penalised. Each iteration starts from `learning_rate` and halves the
step until the Armijo sufficient-decrease condition holds.
"""

import logging
from dataclasses import dataclass
from typing import Any, Mapping, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.special import expit

from src.core.errors import (
    InvalidParamError,
    NonFiniteLossError,
    NonPositiveCostError,
    SingleClassLabelError,
)
from src.core.tracing import traced
from src.data.dataset import Dataset
from src.model.encoding import encode_frame, encode_row, fit_encoding
from src.schemas.model import FeatureEncoding, Hyperparams, LogisticModel, LossComponents

logger = logging.getLogger(__name__)

ARMIJO_C = 1e-4
MAX_HALVINGS = 60


@dataclass(frozen=True)
class Problem:
    """Encoded training problem; theta is [beta..., bias]."""

    X: np.ndarray
    y: np.ndarray
    row_weights: np.ndarray
    cost_weights: np.ndarray
    s: np.ndarray
    l2: float
    eta: float

    @property
    def n_params(self) -> int:
        return self.X.shape[1] + 1


def build_problem(
    X: np.ndarray, y: np.ndarray, s: np.ndarray, weights: np.ndarray, h: Hyperparams
) -> Problem:
    costs = np.where(y == 1, h.cost_fn, h.cost_fp)
    return Problem(
        X=np.asarray(X, dtype=float),
        y=np.asarray(y, dtype=float),
        row_weights=np.asarray(weights, dtype=float),
        cost_weights=np.asarray(weights, dtype=float) * costs,
        s=np.asarray(s, dtype=float),
        l2=h.l2,
        eta=h.fairness,
    )


def objective(theta: np.ndarray, problem: Problem) -> Tuple[LossComponents, np.ndarray]:
    """Loss components and the analytic gradient at theta."""
    beta, bias = theta[:-1], theta[-1]
    z = problem.X @ beta + bias
    p = expit(z)

    v = problem.cost_weights
    v_total = float(v.sum())
    nll = float((v * (np.logaddexp(0.0, z) - problem.y * z)).sum()) / v_total
    g_z = v * (p - problem.y) / v_total

    l2 = float(beta @ beta)

    w = problem.row_weights
    protected = problem.s
    w1 = float((w * protected).sum())
    w0 = float((w * (1.0 - protected)).sum())
    fairness = 0.0
    if w1 > 0.0 and w0 > 0.0:
        gap = float((w * protected * p).sum()) / w1 - float((w * (1.0 - protected) * p).sum()) / w0
        fairness = gap * gap
        if problem.eta > 0.0:
            u = w * p * (1.0 - p) * (protected / w1 - (1.0 - protected) / w0)
            g_z = g_z + 2.0 * problem.eta * gap * u

    grad = np.empty_like(theta)
    grad[:-1] = problem.X.T @ g_z + 2.0 * problem.l2 * beta
    grad[-1] = g_z.sum()
    total = nll + problem.l2 * l2 + problem.eta * fairness
    return LossComponents(nll=nll, l2=l2, fairness=fairness, total=total), grad


def _loss(theta: np.ndarray, problem: Problem) -> float:
    with np.errstate(over="ignore", invalid="ignore"):
        return objective(theta, problem)[0].total


def gradient_descent(
    problem: Problem, h: Hyperparams
) -> Tuple[np.ndarray, LossComponents, bool, int]:
    theta = np.zeros(problem.n_params)
    comps, grad = objective(theta, problem)
    if not np.isfinite(comps.total):
        raise NonFiniteLossError(h.learning_rate, 0)

    converged = False
    iteration = 0
    for iteration in range(1, h.max_iters + 1):
        grad_sq = float(grad @ grad)
        if np.sqrt(grad_sq) < h.tolerance:
            converged = True
            iteration -= 1
            break

        step = h.learning_rate
        any_finite = False
        accepted = False
        for _ in range(MAX_HALVINGS):
            candidate = theta - step * grad
            loss = _loss(candidate, problem)
            if np.isfinite(loss):
                any_finite = True
                if loss <= comps.total - ARMIJO_C * step * grad_sq:
                    accepted = True
                    break
            step *= 0.5
        if not any_finite:
            raise NonFiniteLossError(h.learning_rate, iteration)
        if not accepted:
            # no representable decrease left along the gradient
            converged = True
            break
        theta = candidate
        comps, grad = objective(theta, problem)

    if not converged:
        logger.warning(
            "logistic training stopped at max_iters=%d with gradient norm %.3g",
            h.max_iters,
            float(np.linalg.norm(grad)),
        )
    return theta, comps, converged, iteration


def fit_logistic(
    d: Dataset, h: Hyperparams, target: Optional[np.ndarray] = None
) -> LogisticModel:
    """Train on d's labels, or on `target` when given (for example S for propensity)."""
    y = d.y if target is None else np.asarray(target)
    if d.n < 2:
        raise SingleClassLabelError(f"need at least 2 rows to train, got {d.n}")
    present = np.unique(y[d.weights > 0])
    if present.size < 2:
        raise SingleClassLabelError(f"training target has a single class {present.tolist()}")

    enc = fit_encoding(d, include_protected=h.include_protected)
    X = encode_frame(enc, d.features, d.s)
    problem = build_problem(X, y, d.s, d.weights, h)
    theta, comps, converged, iterations = gradient_descent(problem, h)
    logger.debug(
        "trained logistic model: iterations=%d converged=%s loss=%.6g",
        iterations,
        converged,
        comps.total,
    )
    return LogisticModel(
        encoding=enc,
        weights=[float(x) for x in theta[:-1]],
        bias=float(theta[-1]),
        hyperparams=h,
        converged=converged,
        iterations=iterations,
        loss_components=comps,
    )


@traced("train")
def train(d: Dataset, h: Optional[Hyperparams] = None) -> LogisticModel:
    return fit_logistic(d, h or Hyperparams())


# Prediction


def score_frame(m: LogisticModel, features: pd.DataFrame, s: np.ndarray) -> np.ndarray:
    X = encode_frame(m.encoding, features, s)
    return expit(X @ np.asarray(m.weights, dtype=float) + m.bias)


def score(m: LogisticModel, d: Dataset) -> np.ndarray:
    return score_frame(m, d.features, d.s)


def predict_proba(m: LogisticModel, row: Mapping[str, Any]) -> float:
    x = encode_row(m.encoding, row)
    return float(expit(x @ np.asarray(m.weights, dtype=float) + m.bias))


def _check_threshold(threshold: float) -> None:
    if not 0.0 <= threshold <= 1.0:
        raise InvalidParamError(f"threshold must be in [0, 1], got {threshold}")


def decide(m: LogisticModel, row: Mapping[str, Any], threshold: float = 0.5) -> int:
    _check_threshold(threshold)
    return int(predict_proba(m, row) >= threshold)


def decide_all(probabilities: np.ndarray, threshold: float) -> np.ndarray:
    _check_threshold(threshold)
    return (probabilities >= threshold).astype(np.int8)


def cost_threshold(cost_fp: float, cost_fn: float) -> float:
    """Probability above which accepting has lower expected cost than rejecting."""
    if cost_fp <= 0 or cost_fn <= 0:
        raise NonPositiveCostError(
            f"misclassification costs must be positive (cost_fp={cost_fp}, cost_fn={cost_fn})"
        )
    return cost_fp / (cost_fp + cost_fn)


def uses_protected(m: LogisticModel) -> bool:
    return m.encoding.include_protected


def blank_model(enc: FeatureEncoding, h: Optional[Hyperparams] = None) -> LogisticModel:
    """All-zero model over an encoding; predicts 0.5 everywhere."""
    return LogisticModel(
        encoding=enc,
        weights=[0.0] * len(enc.encoded_names),
        bias=0.0,
        hyperparams=h or Hyperparams(),
    )
