"""End-to-end tests for the fairaudit command line."""

import json
import logging
from unittest.mock import patch

import pytest
from typer.testing import CliRunner

from src.core.config import settings
from src.data.io import schema_to_json, write_csv
from src.main import app, main

runner = CliRunner()


@pytest.fixture(autouse=True)
def detach_cli_logging():
    yield
    root = logging.getLogger("src")
    for handler in [h for h in root.handlers if getattr(h, "_fairaudit", False)]:
        root.removeHandler(handler)
    root.propagate = True


@pytest.fixture
def files(tmp_path, twenty_rows):
    csv = write_csv(twenty_rows, tmp_path / "data.csv")
    schema = tmp_path / "schema.json"
    schema.write_text(schema_to_json(twenty_rows.schema), encoding="utf-8")
    return tmp_path, csv, schema


def _config(tmp_path, **thresholds):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"thresholds": thresholds}), encoding="utf-8")
    return path


@pytest.mark.parametrize("limit,code", [(0.6, 0), (0.3, 2), (0.45, 3)])
def test_audit_data_exit_codes(files, limit, code):
    tmp_path, csv, schema = files
    cfg = _config(tmp_path, max_abs_data_md=limit)
    result = runner.invoke(
        app, ["audit-data", str(csv), "--schema", str(schema), "--config", str(cfg)]
    )
    assert result.exit_code == code, result.output
    assert "data audit:" in result.output


def test_audit_data_without_config_skips_everything(files):
    _, csv, schema = files
    result = runner.invoke(app, ["audit-data", str(csv), "--schema", str(schema)])
    assert result.exit_code == 0
    assert "0 fail, 0 warn" in result.output


def test_invalid_input_exits_one_without_report(files):
    tmp_path, _, schema = files
    bad = tmp_path / "bad.csv"
    bad.write_text("group,outcome,x\nA,1,1\nB,0,2\nC,1,3\n", encoding="utf-8")
    out = tmp_path / "report.json"
    result = runner.invoke(
        app, ["audit-data", str(bad), "--schema", str(schema), "--out", str(out)]
    )
    assert result.exit_code == 1
    assert "NonBinaryProtectedError" in result.output
    assert not out.exists()


def test_missing_file_exits_one(files):
    tmp_path, _, schema = files
    result = runner.invoke(
        app, ["audit-data", str(tmp_path / "nope.csv"), "--schema", str(schema)]
    )
    assert result.exit_code == 1


def test_usage_error_maps_to_one():
    assert main(["audit-data", "--bogus-flag"]) == 1


def test_main_returns_verdict_code(files):
    tmp_path, csv, schema = files
    cfg = _config(tmp_path, max_abs_data_md=0.3)
    assert main(["audit-data", str(csv), "--schema", str(schema), "--config", str(cfg)]) == 2


def test_replay_writes_identical_reports(files):
    tmp_path, csv, schema = files
    cfg = _config(tmp_path, max_abs_data_md=0.3)
    outputs = []
    with patch.object(settings, "source_date_epoch", 1700000000):
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            runner.invoke(
                app,
                ["audit-data", str(csv), "--schema", str(schema), "--config", str(cfg),
                 "--seed", "5", "--out", str(out)],
            )
            outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    assert json.loads(outputs[0])["metadata"]["timestamp"] == "2023-11-14T22:13:20Z"


def test_render_to_stdout(files):
    tmp_path, csv, schema = files
    cfg = _config(tmp_path, max_abs_data_md=0.3)
    report = tmp_path / "report.json"
    runner.invoke(
        app,
        ["audit-data", str(csv), "--schema", str(schema), "--config", str(cfg),
         "--out", str(report)],
    )
    result = runner.invoke(app, ["render", str(report)])
    assert result.exit_code == 0
    assert "**Overall verdict: FAIL**" in result.output


def test_train_and_audit_model(files):
    tmp_path, csv, schema = files
    model = tmp_path / "model.json"
    result = runner.invoke(
        app,
        ["train", str(csv), "--schema", str(schema), "--model-out", str(model),
         "--include-protected"],
    )
    assert result.exit_code == 0, result.output
    assert "legal liability" in result.output
    assert json.loads(model.read_text(encoding="utf-8"))["encoding"]["include_protected"]

    cfg = _config(tmp_path, max_abs_causal_md=0.5)
    result = runner.invoke(
        app,
        ["audit-model", str(model), str(csv), "--schema", str(schema), "--config", str(cfg)],
    )
    assert result.exit_code in (0, 2, 3)
    assert "model audit:" in result.output


def test_mitigate_reweight_writes_weights(files):
    tmp_path, csv, schema = files
    out = tmp_path / "reweighted.csv"
    record = tmp_path / "record.json"
    result = runner.invoke(
        app,
        ["mitigate", "pre:reweight", str(csv), "--schema", str(schema), "--out", str(out),
         "--record-out", str(record)],
    )
    assert result.exit_code == 0, result.output
    assert out.read_text(encoding="utf-8").splitlines()[0].endswith("_weight")
    assert json.loads(record.read_text(encoding="utf-8"))["method"] == "pre:reweight"


def test_post_thresholds_needs_model(files):
    tmp_path, csv, schema = files
    result = runner.invoke(
        app,
        ["mitigate", "post:thresholds", str(csv), "--schema", str(schema),
         "--out", str(tmp_path / "t.json")],
    )
    assert result.exit_code == 1
    assert "needs --model" in result.output


def test_gen_scenario_then_audit(tmp_path):
    data = tmp_path / "direct.csv"
    schema = tmp_path / "schema.json"
    cfg = tmp_path / "config.json"
    result = runner.invoke(
        app,
        ["gen-scenario", "direct_discrimination", "--out", str(data), "--n", "3000",
         "--seed", "1", "--schema-out", str(schema), "--config-out", str(cfg)],
    )
    assert result.exit_code == 0, result.output
    assert "designated test D1.label.mean_difference" in result.output
    truth = json.loads((tmp_path / "direct.truth.json").read_text(encoding="utf-8"))
    assert truth["planted"]["gap"] == 0.3

    result = runner.invoke(
        app, ["audit-data", str(data), "--schema", str(schema), "--config", str(cfg)]
    )
    assert result.exit_code == 2


def test_gen_scenario_inline_params(tmp_path):
    data = tmp_path / "low.csv"
    result = runner.invoke(
        app,
        ["gen-scenario", "low_support", "--out", str(data), "--n", "2000",
         "--params", '{"protected_share": 0.1}'],
    )
    assert result.exit_code == 0, result.output
    truth = json.loads((tmp_path / "low.truth.json").read_text(encoding="utf-8"))
    assert truth["planted"]["protected_share"] == 0.1


def test_gen_scenario_unknown_kind(tmp_path):
    assert main(["gen-scenario", "nonsense", "--out", str(tmp_path / "x.csv")]) == 1
    assert not (tmp_path / "x.csv").exists()


def test_simulate_writes_series(tmp_path):
    sim = tmp_path / "sim.json"
    sim.write_text(
        json.dumps(
            {
                "zones": 2,
                "latent_violent_rates": [10, 10],
                "latent_nuisance_rates": [400, 400],
                "patrol_budget": 1.0,
                "rounds": 5,
                "initial_allocation": [0.7, 0.3],
            }
        ),
        encoding="utf-8",
    )
    out = tmp_path / "series.json"
    table = tmp_path / "series.csv"
    result = runner.invoke(
        app, ["simulate", str(sim), "--out", str(out), "--csv-out", str(table), "--seed", "2"]
    )
    assert result.exit_code == 0, result.output
    assert "simulated 5 rounds" in result.output
    series = json.loads(out.read_text(encoding="utf-8"))
    assert series["config"]["seed"] == 2
    assert len(series["rounds"]) == 5
    assert len(table.read_text(encoding="utf-8").splitlines()) == 11


def test_ragged_csv_exits_one(files):
    tmp_path, _, schema = files
    bad = tmp_path / "ragged.csv"
    bad.write_text("group,outcome,x\nA,1,1\nB,0,2,7,7\n", encoding="utf-8")
    assert main(["audit-data", str(bad), "--schema", str(schema)]) == 1


def test_non_utf8_inputs_exit_one(files):
    tmp_path, csv, schema = files
    latin = tmp_path / "latin.csv"
    latin.write_bytes(b"group,outcome,x\nA,1,1\n\xe9,0,2\n")
    assert main(["audit-data", str(latin), "--schema", str(schema)]) == 1

    cfg = tmp_path / "config.json"
    cfg.write_bytes(b'{"thresholds": {"max_abs_data_md": 0.3}} \xff')
    assert main(["audit-data", str(csv), "--schema", str(schema), "--config", str(cfg)]) == 1


def test_long_inline_params_are_not_paths(tmp_path):
    data = tmp_path / "low.csv"
    params = '{"protected_share": 0.1' + " " * 300 + "}"
    assert main(["gen-scenario", "low_support", "--out", str(data), "--n", "500",
                 "--params", params]) == 0
    truth = json.loads((tmp_path / "low.truth.json").read_text(encoding="utf-8"))
    assert truth["planted"]["protected_share"] == 0.1


def test_gen_scenario_failed_write_leaves_no_outputs(tmp_path):
    data = tmp_path / "direct.csv"
    with patch("src.core.files.os.replace", side_effect=OSError("disk full")):
        code = main(["gen-scenario", "direct_discrimination", "--out", str(data), "--n", "200",
                     "--schema-out", str(tmp_path / "schema.json")])
    assert code == 1
    assert list(tmp_path.iterdir()) == []
