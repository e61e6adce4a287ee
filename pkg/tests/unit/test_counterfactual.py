"""Tests for the protected-attribute flip audit."""

import numpy as np
import pytest

from src.counterfactual import flip_audit, model_decision_fn, row_decision_fn
from src.model import train
from src.model.encoding import fit_encoding
from src.model.logistic import blank_model
from src.scenarios import generate
from src.schemas.dataset import Stratification
from src.schemas.model import Hyperparams
from src.schemas.scenarios import ScenarioSpec
from tests.helpers import build_dataset


def _favours_group_a(features, s):
    return (np.asarray(s) == 0).astype(float)


def test_model_without_protected_input_is_unaffected(twenty_rows):
    m = train(twenty_rows)
    result = flip_audit(model_decision_fn(m), twenty_rows)
    assert result.causal_mean_difference_decisions == 0.0
    assert result.causal_mean_difference_probabilities == 0.0
    assert result.rows_affected == 0


def test_rule_on_protected_attribute_only(twenty_rows):
    result = flip_audit(_favours_group_a, twenty_rows)
    assert result.causal_mean_difference_decisions == -1.0
    assert result.rows_affected == twenty_rows.n
    assert result.n == 20


def test_reverse_negates(twenty_rows):
    forward = flip_audit(_favours_group_a, twenty_rows)
    backward = flip_audit(_favours_group_a, twenty_rows, reverse=True)
    assert backward.causal_mean_difference_decisions == -forward.causal_mean_difference_decisions
    assert backward.causal_mean_difference_probabilities == pytest.approx(
        -forward.causal_mean_difference_probabilities
    )


def test_per_partition_values(simpson_rows):
    result = flip_audit(_favours_group_a, simpson_rows, spec=Stratification.exact("x"))
    assert result.per_partition == {"x=0": -1.0, "x=1": -1.0}
    assert result.partition_weights is not None
    assert sum(result.partition_weights.values()) == pytest.approx(1.0)


def test_row_level_scorer_is_lifted():
    d = build_dataset([1, 0, 1, 0], [1, 0, 0, 1], {"x": [0.0, 1.0, 2.0, 3.0]})

    def scorer(row):
        return 0.0 if row["group"] == "B" else 1.0

    fn = row_decision_fn(scorer, "group", ("B", "A"))
    result = flip_audit(fn, d)
    assert result.causal_mean_difference_decisions == -1.0


def test_model_trained_on_protected_attribute_shows_treatment():
    d, _ = generate(ScenarioSpec(kind="direct_discrimination", n=5000, seed=0))
    m = train(d, Hyperparams(include_protected=True))
    result = flip_audit(model_decision_fn(m), d)
    assert result.causal_mean_difference_probabilities <= -0.1
    assert result.causal_mean_difference_decisions <= -0.05


def test_random_models_without_protected_input_show_no_treatment():
    rng = np.random.default_rng(17)
    for _ in range(100):
        n = int(rng.integers(10, 80))
        s = rng.integers(0, 2, n)
        s[:2] = (1, 0)
        d = build_dataset(
            s.tolist(),
            rng.integers(0, 2, n).tolist(),
            {"x": rng.normal(size=n).tolist(), "c": rng.choice(["p", "q", "r"], n).tolist()},
        )
        enc = fit_encoding(d)
        m = blank_model(enc).model_copy(
            update={
                "weights": rng.normal(scale=2.0, size=len(enc.encoded_names)).tolist(),
                "bias": float(rng.normal()),
            }
        )
        result = flip_audit(model_decision_fn(m), d, threshold=float(rng.uniform(0.2, 0.8)))
        assert result.causal_mean_difference_decisions == 0.0
        assert result.causal_mean_difference_probabilities == 0.0
        assert result.rows_affected == 0
