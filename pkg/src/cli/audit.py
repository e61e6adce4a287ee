"""audit-data, audit-model and render commands."""

import logging
from enum import Enum
from pathlib import Path
from typing import Optional

import typer

from src.audit.render import load_report, render_report
from src.audit.runner import audit_data, audit_model
from src.cli.io import exit_code_for, guarded, load_audit_config
from src.core.config import settings
from src.core.files import write_bytes_atomic
from src.data.io import load_csv, load_schema
from src.model.serialize import load_model
from src.schemas.audit import AuditReport

logger = logging.getLogger(__name__)


class ReportFormat(str, Enum):
    json = "json"
    markdown = "markdown"
    md = "md"


def summary_line(report: AuditReport) -> str:
    counts = {s: sum(1 for t in report.tests if t.status == s) for s in ("fail", "warn", "skipped")}
    return (
        f"{report.metadata.stage} audit: {report.verdict} "
        f"({counts['fail']} fail, {counts['warn']} warn, {counts['skipped']} skipped, "
        f"{len(report.tests)} tests)"
    )


def _finish(report: AuditReport, out: Optional[Path], fmt: ReportFormat) -> None:
    payload = render_report(report, fmt.value)
    if out is not None:
        write_bytes_atomic(out, payload)
    typer.echo(summary_line(report))
    raise typer.Exit(code=exit_code_for(report.verdict))


@guarded
def audit_data_command(
    csv: Path = typer.Argument(..., help="Dataset CSV"),
    schema: Path = typer.Option(..., "--schema", help="Schema JSON"),
    config: Optional[Path] = typer.Option(None, "--config", help="Audit config JSON"),
    seed: Optional[int] = typer.Option(None, "--seed"),
    out: Optional[Path] = typer.Option(None, "--out", help="Report destination"),
    fmt: ReportFormat = typer.Option(ReportFormat.json, "--format"),
) -> None:
    """Run the data-stage unit tests. Exit 0 pass, 2 fail, 3 warn, 1 error."""
    cfg = load_audit_config(config)
    dataset = load_csv(csv, load_schema(schema))
    report = audit_data(dataset, cfg, seed=settings.default_seed if seed is None else seed)
    _finish(report, out, fmt)


@guarded
def audit_model_command(
    model: Path = typer.Argument(..., help="Model JSON"),
    csv: Path = typer.Argument(..., help="Holdout CSV"),
    schema: Path = typer.Option(..., "--schema"),
    config: Optional[Path] = typer.Option(None, "--config"),
    threshold: float = typer.Option(0.5, "--threshold", min=0.0, max=1.0),
    seed: Optional[int] = typer.Option(None, "--seed"),
    out: Optional[Path] = typer.Option(None, "--out"),
    fmt: ReportFormat = typer.Option(ReportFormat.json, "--format"),
) -> None:
    """Run the pre-deployment tests on a trained model and a holdout set."""
    cfg = load_audit_config(config)
    m = load_model(model)
    holdout = load_csv(csv, load_schema(schema))
    report = audit_model(
        m, holdout, threshold, cfg, seed=settings.default_seed if seed is None else seed
    )
    _finish(report, out, fmt)


@guarded
def render_command(
    report: Path = typer.Argument(..., help="Report JSON produced by an audit"),
    fmt: ReportFormat = typer.Option(ReportFormat.markdown, "--format"),
    out: Optional[Path] = typer.Option(None, "--out"),
) -> None:
    """Render a saved report; without --out the rendering goes to stdout."""
    payload = render_report(load_report(report), fmt.value)
    if out is None:
        typer.echo(payload.decode("utf-8"), nl=False)
    else:
        write_bytes_atomic(out, payload)
