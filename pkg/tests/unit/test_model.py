"""Tests for the fairness-regularized logistic learner."""

import json

import numpy as np
import pytest

from src.core.errors import (
    NonPositiveCostError,
    SingleClassLabelError,
    UnknownLevelError,
    UnsupportedModelVersionError,
)
from src.model import (
    cost_threshold,
    decide,
    evaluate,
    model_fingerprint,
    model_from_json,
    model_to_json,
    predict_proba,
    score,
    train,
)
from src.model.encoding import fit_encoding
from src.model.evaluate import evaluate_decisions
from src.model.logistic import blank_model, build_problem, objective, uses_protected
from src.scenarios import generate
from src.schemas.model import FeatureEncoding, Hyperparams, LogisticModel
from src.schemas.scenarios import ScenarioSpec
from tests.helpers import build_dataset


def _separable():
    x = [float(i) for i in range(20)]
    return build_dataset([i % 2 for i in range(20)], [int(v >= 10) for v in x], {"x": x})


def _hand_model(bias: float = 0.0) -> LogisticModel:
    enc = FeatureEncoding(
        numeric={"x": (0.0, 1.0)},
        order=["x"],
        protected_column="group",
        protected_value="B",
    )
    return LogisticModel(encoding=enc, weights=[1.0], bias=bias, hyperparams=Hyperparams())


def test_separable_data_is_learned():
    d = _separable()
    m = train(d)
    assert evaluate(m, d).accuracy == 1.0
    assert m.weights[0] > 0


def test_training_is_deterministic():
    d = _separable()
    assert model_to_json(train(d)) == model_to_json(train(d))


def test_single_class_target_rejected():
    d = build_dataset([1, 0, 1, 0], [1, 1, 1, 1], {"x": [0.0, 1.0, 2.0, 3.0]})
    with pytest.raises(SingleClassLabelError):
        train(d)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(3)
    n = 60
    X = rng.normal(size=(n, 3))
    y = (rng.random(n) < 0.5).astype(float)
    s = (rng.random(n) < 0.4).astype(float)
    w = rng.uniform(0.5, 2.0, n)
    h = Hyperparams(l2=0.1, fairness=2.0, cost_fp=1.0, cost_fn=3.0)
    problem = build_problem(X, y, s, w, h)
    theta = rng.normal(scale=0.5, size=problem.n_params)

    _, grad = objective(theta, problem)
    eps = 1e-6
    numeric = np.empty_like(theta)
    for i in range(theta.size):
        step = np.zeros_like(theta)
        step[i] = eps
        up = objective(theta + step, problem)[0].total
        down = objective(theta - step, problem)[0].total
        numeric[i] = (up - down) / (2 * eps)
    np.testing.assert_allclose(grad, numeric, rtol=1e-5, atol=1e-7)


def test_loss_components_add_up():
    m = train(_separable(), Hyperparams(l2=0.01, fairness=1.0))
    c = m.loss_components
    assert c is not None
    assert c.total == pytest.approx(c.nll + 0.01 * c.l2 + 1.0 * c.fairness)


def test_blank_model_predicts_half(twenty_rows):
    m = blank_model(fit_encoding(twenty_rows))
    np.testing.assert_allclose(score(m, twenty_rows), 0.5)


def test_hand_set_weights():
    m = _hand_model()
    assert predict_proba(m, {"x": 1.0}) == pytest.approx(0.7311, abs=1e-4)
    assert decide(m, {"x": 1.0}, threshold=0.0) == 1
    assert decide(m, {"x": 1.0}, threshold=0.7312) == 0


def test_large_bias_saturates():
    assert predict_proba(_hand_model(bias=20.0), {"x": 0.0}) > 0.999


def test_cost_threshold():
    assert cost_threshold(1.0, 1.0) == 0.5
    assert cost_threshold(1.0, 9.0) == pytest.approx(0.1)
    assert cost_threshold(9.0, 1.0) == pytest.approx(0.9)
    with pytest.raises(NonPositiveCostError):
        cost_threshold(0.0, 1.0)


def test_evaluate_perfect_decisions(twenty_rows):
    record = evaluate_decisions(twenty_rows, twenty_rows.y, 0.5)
    assert record.accuracy == 1.0
    assert record.expected_cost == 0.0
    assert record.protected.tpr == 1.0
    assert record.favored.fpr == 0.0
    assert record.mean_difference.value == pytest.approx(-0.4)


def test_evaluate_absent_tpr_is_reported():
    d = build_dataset([1, 1, 0, 0], [0, 0, 1, 0], {"x": [0.0, 1.0, 2.0, 3.0]})
    record = evaluate_decisions(d, np.array([1, 0, 1, 0]), 0.5)
    assert record.protected.tpr is None
    assert any("protected group has no positive labels" in c for c in record.caveats)


def test_evaluate_accept_everyone(twenty_rows):
    record = evaluate_decisions(twenty_rows, np.ones(20, dtype=int), 0.5)
    assert record.precision == pytest.approx(0.4)
    assert record.protected.acceptance_rate == 1.0
    assert record.favored.acceptance_rate == 1.0
    assert record.mean_difference.value == 0.0


def test_unseen_level_rejected():
    d = build_dataset([1, 0, 1, 0], [1, 0, 0, 1], {"c": ["a", "b", "a", "b"]})
    m = train(d)
    with pytest.raises(UnknownLevelError):
        predict_proba(m, {"c": "z"})


def test_include_protected_appends_indicator(twenty_rows):
    m = train(twenty_rows, Hyperparams(include_protected=True))
    assert uses_protected(m)
    assert m.encoding.encoded_names[-1] == "group=B"
    assert len(m.weights) == 2


def test_model_document_round_trip(twenty_rows):
    m = train(twenty_rows)
    back = model_from_json(model_to_json(m))
    assert back == m
    assert model_fingerprint(back) == model_fingerprint(m)


def test_unsupported_model_version(twenty_rows):
    payload = json.loads(model_to_json(train(twenty_rows)))
    payload["version"] = 99
    with pytest.raises(UnsupportedModelVersionError):
        model_from_json(json.dumps(payload))


def test_fairness_weight_shrinks_probability_gap():
    d, _ = generate(ScenarioSpec(kind="redlining", n=4000, seed=0))

    def gap(h: Hyperparams) -> float:
        p = score(train(d, h), d)
        return float(p[d.s == 1].mean() - p[d.s == 0].mean())

    plain = gap(Hyperparams())
    fair = gap(Hyperparams(fairness=100.0))
    assert abs(plain) > 0.05
    assert abs(fair) < abs(plain) / 2


def test_fairness_component_falls_as_weight_grows():
    d, _ = generate(ScenarioSpec(kind="redlining", n=2000, seed=2))
    penalties = []
    for eta in (0.0, 1.0, 10.0, 100.0):
        components = train(d, Hyperparams(fairness=eta)).loss_components
        assert components is not None
        penalties.append(components.fairness)
    inversions = sum(later > earlier for earlier, later in zip(penalties, penalties[1:]))
    assert inversions <= 1
    assert penalties[-1] < penalties[0]
