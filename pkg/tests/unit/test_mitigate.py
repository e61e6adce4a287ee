"""Tests for reweighting, resampling, massaging, group thresholds and weight tuning."""

import numpy as np
import pytest

from src.core.errors import EmptyCellError, InvalidParamError, MissingPositivesError
from src.metrics import mean_difference
from src.mitigate import (
    apply_group_thresholds,
    group_thresholds,
    massage,
    resample,
    reweight,
    tune_fairness_weight,
)
from src.mitigate.postprocess import threshold_grid
from src.mitigate.preprocess import massage_count
from src.model import decide_all, evaluate_decisions, score, train
from src.scenarios import generate
from src.schemas.model import FeatureEncoding, Hyperparams, LogisticModel
from src.schemas.scenarios import ScenarioSpec
from tests.helpers import build_dataset, cells


def _scenario(kind: str, n: int, seed: int):
    return generate(ScenarioSpec(kind=kind, n=n, seed=seed))[0]


def test_reweight_multipliers(twenty_rows):
    out, record = reweight(twenty_rows)
    assert record.parameters["w(s=1,y=1)"] == pytest.approx(2.0)
    assert record.parameters["w(s=0,y=1)"] == pytest.approx(2 / 3)
    assert record.before.value == pytest.approx(-0.4)
    assert record.after.value == pytest.approx(0.0, abs=1e-12)
    assert out.y.tolist() == twenty_rows.y.tolist()


def test_reweight_needs_every_cell(make_dataset):
    d = make_dataset([1, 1, 0, 0], [0, 0, 1, 0])
    with pytest.raises(EmptyCellError):
        reweight(d)


def test_resample_matches_independent_counts(twenty_rows):
    out, record = resample(twenty_rows, seed=1)
    assert out.n == 20
    assert record.parameters["expected_counts"]["n(s=1,y=1)"] == 4
    assert mean_difference(out).value == pytest.approx(0.0, abs=1e-12)
    assert set(out.weights.tolist()) == {1.0}


def test_resample_is_seeded(twenty_rows):
    a, _ = resample(twenty_rows, seed=4)
    b, _ = resample(twenty_rows, seed=4)
    assert a.fingerprint() == b.fingerprint()


def test_resample_bounds_difference_on_scenario():
    d = _scenario("direct_discrimination", 3000, 2)
    out, _ = resample(d, seed=0)
    assert abs(mean_difference(out).value) < 0.01


def test_massage_count():
    assert massage_count(10, 2, 10, 6) == 2
    assert massage_count(10, 5, 10, 5) == 0


def test_massage_closes_gap(twenty_rows):
    out, record = massage(twenty_rows)
    assert record.parameters["pairs"] == 2
    assert record.changed == 4
    assert mean_difference(out).value == pytest.approx(0.0, abs=1e-12)
    assert int(out.y.sum()) == int(twenty_rows.y.sum())


def test_massage_without_gap_is_identity(make_dataset):
    s, y = cells({(1, 1): 3, (1, 0): 3, (0, 1): 3, (0, 0): 3})
    d = make_dataset(s, y, {"x": [float(i) for i in range(12)]})
    out, record = massage(d)
    assert out is d
    assert record.changed == 0


def test_massage_is_deterministic(twenty_rows):
    a, _ = massage(twenty_rows)
    b, _ = massage(twenty_rows)
    assert a.y.tolist() == b.y.tolist()


def test_threshold_grid():
    assert threshold_grid(0.3).tolist() == [0.0, 0.3, 0.6, 0.9, 1.0]
    assert threshold_grid(0.5).tolist() == [0.0, 0.5, 1.0]
    for bad in (0.0, 0.6):
        with pytest.raises(InvalidParamError):
            threshold_grid(bad)


def _symmetric():
    x = [float(i) for i in range(10)] * 2
    d = build_dataset([1] * 10 + [0] * 10, [int(v >= 5) for v in x], {"x": x})
    enc = FeatureEncoding(
        numeric={"x": (4.5, 1.0)}, order=["x"], protected_column="group", protected_value="B"
    )
    m = LogisticModel(encoding=enc, weights=[1.0], bias=0.0, hyperparams=Hyperparams())
    return m, d


def test_symmetric_groups_share_one_threshold():
    m, d = _symmetric()
    pair, record = group_thresholds(m, d, epsilon=0.0)
    assert pair.protected_threshold == pair.favored_threshold
    assert pair.achieved_disparity == 0.0
    assert pair.achieved_accuracy == 1.0
    assert not pair.infeasible
    assert record.changed == 0


def test_equal_opportunity_needs_positives():
    m, _ = _symmetric()
    x = [float(i) for i in range(8)]
    d = build_dataset([1] * 4 + [0] * 4, [0, 0, 0, 0, 0, 1, 0, 1], {"x": x})
    with pytest.raises(MissingPositivesError):
        group_thresholds(m, d, target="equal_opportunity")


def test_group_thresholds_on_redlining():
    m = train(_scenario("redlining", 4000, 0))
    holdout = _scenario("redlining", 4000, 1)
    pair, record = group_thresholds(m, holdout, epsilon=0.02)
    assert not pair.infeasible
    assert abs(pair.achieved_disparity) <= 0.02
    assert abs(record.before.value) > abs(record.after.value)

    a = apply_group_thresholds(score(m, holdout), holdout.s, pair)
    assert evaluate_decisions(holdout, a, 0.5).accuracy == pytest.approx(pair.achieved_accuracy)


def test_unconstrained_pair_beats_every_single_threshold():
    m = train(_scenario("redlining", 2000, 3))
    holdout = _scenario("redlining", 2000, 4)
    pair, _ = group_thresholds(m, holdout, epsilon=1.0, grid_step=0.05)
    p = score(m, holdout)
    best_single = max(
        evaluate_decisions(holdout, decide_all(p, float(t)), float(t)).accuracy
        for t in threshold_grid(0.05)
    )
    assert pair.achieved_accuracy >= best_single - 1e-12


def test_tuning_with_single_weight():
    d = _scenario("clean_independent", 1000, 0)
    h, record = tune_fairness_weight(d, d, [0.0], max_accuracy_loss=0.0)
    assert h.fairness == 0.0
    assert record.parameters["chosen_eta"] == 0.0


def test_tuning_keeps_zero_weight_on_clean_data():
    d_train = _scenario("clean_independent", 3000, 1)
    d_val = _scenario("clean_independent", 3000, 2)
    h, _ = tune_fairness_weight(
        d_train, d_val, [0.0, 10.0], max_accuracy_loss=0.05, md_tolerance=0.05
    )
    assert h.fairness == 0.0


def test_tuning_prefers_fairness_on_redlining():
    d_train = _scenario("redlining", 3000, 5)
    d_val = _scenario("redlining", 3000, 6)
    h, record = tune_fairness_weight(d_train, d_val, [0.0, 100.0], max_accuracy_loss=0.2)
    assert h.fairness == 100.0
    assert abs(record.after.value) < abs(record.before.value)


def test_tuning_argument_checks(twenty_rows):
    with pytest.raises(InvalidParamError):
        tune_fairness_weight(twenty_rows, twenty_rows, [], max_accuracy_loss=0.0)
    with pytest.raises(InvalidParamError):
        tune_fairness_weight(twenty_rows, twenty_rows, [-1.0], max_accuracy_loss=0.0)



def _rescan(p, d, grid, epsilon):
    """Every grid pair evaluated one at a time: best feasible accuracy and its pairs."""
    w, y, s = d.weights, d.y, d.s
    scored = []
    for t1 in grid:
        for t0 in grid:
            a = np.where(s == 1, p >= t1, p >= t0)
            rate1 = w[(s == 1) & a].sum() / w[s == 1].sum()
            rate0 = w[(s == 0) & a].sum() / w[s == 0].sum()
            if abs(rate1 - rate0) <= epsilon + 1e-12:
                scored.append((float(w[a == (y == 1)].sum() / w.sum()), float(t1), float(t0)))
    best = max(acc for acc, _, _ in scored)
    return best, [(t1, t0) for acc, t1, t0 in scored if acc >= best - 1e-12]


@pytest.mark.parametrize("seed", range(10))
def test_group_thresholds_match_exhaustive_rescan(seed):
    m = train(_scenario("redlining", 1000, 50))
    holdout = _scenario("redlining", 1500, seed)
    pair, _ = group_thresholds(m, holdout, epsilon=0.02, grid_step=0.05)
    best, optimal = _rescan(score(m, holdout), holdout, threshold_grid(0.05), 0.02)

    assert not pair.infeasible
    assert abs(pair.achieved_disparity) <= 0.02
    assert pair.achieved_accuracy == pytest.approx(best, abs=1e-12)
    chosen = (pair.protected_threshold, pair.favored_threshold)
    assert chosen == min(optimal, key=lambda t: (abs(t[0] - t[1]), t[0], t[1]))


@pytest.mark.parametrize("seed", range(10))
def test_massage_flips_exactly_twice_the_pairs(seed):
    d = _scenario("direct_discrimination", 2000, seed)
    out, record = massage(d)
    pairs = record.parameters["pairs"]
    assert pairs > 0
    assert int(np.count_nonzero(out.y != d.y)) == 2 * pairs
    assert out.group_sizes == d.group_sizes
    assert abs(mean_difference(out).value) <= 1 / min(d.group_sizes)
