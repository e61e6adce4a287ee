"""gen-scenario and simulate commands."""

import logging
from pathlib import Path
from typing import Optional

import typer

from src.audit.render import canonical_json
from src.cli.io import guarded, load_document, parse_inline_or_file
from src.core.files import write_all_atomic
from src.data.io import dataset_to_csv, schema_to_json
from src.scenarios.feedback import run_feedback_sim, series_csv
from src.scenarios.generators import generate, scenario_audit_config, scenario_schema
from src.schemas.scenarios import (
    SCENARIO_KINDS,
    FeedbackSimConfig,
    ScenarioParams,
    ScenarioSpec,
)

logger = logging.getLogger(__name__)


@guarded
def gen_scenario_command(
    kind: str = typer.Argument(..., help=f"One of: {', '.join(SCENARIO_KINDS)}"),
    out: Path = typer.Option(..., "--out", help="Dataset CSV destination"),
    n: int = typer.Option(10000, "--n", min=4),
    seed: int = typer.Option(0, "--seed"),
    params: Optional[str] = typer.Option(None, "--params", help="Inline JSON or JSON file"),
    truth_out: Optional[Path] = typer.Option(None, "--truth-out"),
    schema_out: Optional[Path] = typer.Option(None, "--schema-out"),
    config_out: Optional[Path] = typer.Option(None, "--config-out"),
) -> None:
    """Generate a dataset with one planted cause of discrimination plus its sidecar."""
    if kind not in SCENARIO_KINDS:
        raise typer.BadParameter(f"unknown kind '{kind}'", param_hint="KIND")
    spec = ScenarioSpec(
        kind=kind,  # type: ignore[arg-type]
        n=n,
        seed=seed,
        params=parse_inline_or_file(params, ScenarioParams) or ScenarioParams(),
    )
    dataset, truth = generate(spec)
    outputs = {
        out: dataset_to_csv(dataset),
        truth_out or out.with_suffix(".truth.json"): canonical_json(truth.model_dump(mode="json")),
    }
    if schema_out is not None:
        outputs[schema_out] = schema_to_json(scenario_schema(kind)).encode("utf-8")
    if config_out is not None:
        outputs[config_out] = canonical_json(scenario_audit_config(kind).model_dump(mode="json"))
    write_all_atomic(outputs)
    typer.echo(f"{kind}: {truth.n_rows} rows, designated test {truth.designated_test}")


@guarded
def simulate_command(
    sim_config: Path = typer.Argument(..., help="Feedback simulation config JSON"),
    out: Path = typer.Option(..., "--out", help="Series JSON destination"),
    csv_out: Optional[Path] = typer.Option(None, "--csv-out", help="Per-round table"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Overrides the config seed"),
) -> None:
    """Run the predictive-patrol feedback loop."""
    cfg = load_document(sim_config, FeedbackSimConfig)
    if seed is not None:
        cfg = cfg.model_copy(update={"seed": seed})
    series = run_feedback_sim(cfg)
    outputs = {out: canonical_json(series.model_dump(mode="json"))}
    if csv_out is not None:
        outputs[csv_out] = series_csv(series)
    write_all_atomic(outputs)
    last = series.rounds[-1]
    shares = [round(a / cfg.patrol_budget, 4) for a in last.allocation]
    typer.echo(
        f"simulated {cfg.rounds} rounds: last shares {shares}, disparity {last.share_disparity:.4f}"
    )
