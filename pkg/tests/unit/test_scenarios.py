"""Tests for the synthetic scenario generators."""

import pytest

from src.metrics import mean_difference
from src.scenarios import generate, scenario_audit_config, scenario_schema
from src.scenarios.generators import DESIGNATED_TESTS
from src.schemas.scenarios import SCENARIO_KINDS, ScenarioParams, ScenarioSpec


def test_generation_is_pure_in_seed():
    spec = ScenarioSpec(kind="redlining", n=2000, seed=9)
    d1, t1 = generate(spec)
    d2, t2 = generate(spec)
    assert d1.fingerprint() == d2.fingerprint()
    assert t1 == t2
    other, _ = generate(spec.model_copy(update={"seed": 10}))
    assert other.fingerprint() != d1.fingerprint()


@pytest.mark.parametrize("kind", SCENARIO_KINDS)
def test_every_kind_generates_with_its_sidecar(kind):
    d, truth = generate(ScenarioSpec(kind=kind, n=3000, seed=0))
    assert truth.kind == kind
    assert truth.designated_test == DESIGNATED_TESTS[kind]
    assert truth.n_rows == d.n
    assert len(truth.latent_merit) == d.n
    assert d.schema == scenario_schema(kind)
    assert "merit" not in d.features.columns


def test_direct_discrimination_plants_the_gap():
    d, truth = generate(ScenarioSpec(kind="direct_discrimination", seed=1))
    assert truth.planted["gap"] == 0.3
    assert mean_difference(d).value == pytest.approx(-0.3, abs=0.03)


def test_clean_scenario_has_no_gap():
    d, _ = generate(ScenarioSpec(kind="clean_independent", seed=1))
    assert abs(mean_difference(d).value) < 0.03


def test_gap_parameter_is_honoured():
    spec = ScenarioSpec(kind="direct_discrimination", seed=2, params=ScenarioParams(gap=0.1))
    d, _ = generate(spec)
    assert mean_difference(d).value == pytest.approx(-0.1, abs=0.03)


def test_low_support_uses_small_protected_share():
    d, truth = generate(ScenarioSpec(kind="low_support", seed=0))
    assert truth.planted["protected_share"] == 0.02
    assert d.n_protected / d.n == pytest.approx(0.02, abs=0.006)


def test_under_representation_drops_rows():
    d, truth = generate(ScenarioSpec(kind="under_representation", seed=0))
    assert truth.n_generated == 10000
    assert truth.n_rows < truth.n_generated
    assert truth.planted["retention"] == 0.4


def test_proxy_target_exports_sub_targets():
    d, _ = generate(ScenarioSpec(kind="proxy_target", n=5000, seed=0))
    assert {"no_violent", "no_nuisance"} <= set(d.extras.columns)
    violent = d.binary_extra("no_violent")
    nuisance = d.binary_extra("no_nuisance")
    assert abs(mean_difference(d, violent).value) < 0.05
    assert mean_difference(d, nuisance).value == pytest.approx(-0.4, abs=0.05)


def test_censored_feedback_records_screened_out_applicants():
    d, truth = generate(ScenarioSpec(kind="censored_feedback", seed=0))
    planted = truth.planted
    assert planted["screened_out_protected"] > planted["screened_out_favored"]
    assert truth.n_rows == 10000 - planted["screened_out_protected"] - planted[
        "screened_out_favored"
    ]
    assert 0.0 < planted["screened_out_true_rate_protected"] < 1.0
    assert any("recall is unobservable" in note for note in truth.notes)


def test_audit_configs_match_the_planted_structure():
    assert scenario_audit_config("redlining").stratification.columns == ["district"]
    proxy = scenario_audit_config("proxy_target")
    assert [sub.column for sub in proxy.sub_target_columns] == ["no_violent", "no_nuisance"]
    assert scenario_audit_config("clean_independent").sub_target_columns == []
