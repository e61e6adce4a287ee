"""
Report rendering.

JSON output is canonical: keys sorted, floats rounded to a fixed number of
significant digits and non-finite floats written as null, so that replaying
an audit on identical inputs yields identical bytes.
"""

import json
import math
from pathlib import Path
from typing import Any, List, Union

from pydantic import ValidationError

from src.core.config import settings
from src.core.errors import InvalidReportError, UnknownFormatError
from src.schemas.audit import AuditCheck, AuditReport

FORMATS = ("json", "markdown")
FORMAT_ALIASES = {"json": "json", "markdown": "markdown", "md": "markdown"}


def _round(value: float, digits: int) -> Any:
    if not math.isfinite(value):
        return None
    if value == 0.0:
        return 0.0
    return float(f"{value:.{digits}g}")


def canonicalize(obj: Any, digits: int) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return _round(obj, digits)
    if isinstance(obj, dict):
        return {str(k): canonicalize(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonicalize(v, digits) for v in obj]
    return obj


def canonical_json(payload: Any, digits: int | None = None) -> bytes:
    digits = digits or settings.report_significant_digits
    text = json.dumps(
        canonicalize(payload, digits), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False
    )
    return (text + "\n").encode("utf-8")


def _fmt(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.4g}"
    return str(value)


def _disadvantaged(check: AuditCheck) -> str:
    if not check.signed or check.metric.value is None:
        return ""
    return "yes" if check.metric.value < 0 else "no"


def render_markdown(r: AuditReport) -> str:
    verdict = r.verdict.upper()
    lines: List[str] = [
        f"# {r.metadata.stage.capitalize()} audit: {verdict}",
        "",
        f"**Overall verdict: {verdict}**",
        "",
        "| id | metric | value | threshold | bound | status | protected group disadvantaged |",
        "|---|---|---|---|---|---|---|",
    ]
    for check in r.tests:
        lines.append(
            "| {id} | {name} | {value} | {threshold} | {bound} | {status} | {dis} |".format(
                id=check.id,
                name=check.name,
                value=_fmt(check.metric.value),
                threshold=_fmt(check.threshold),
                bound=check.direction,
                status=check.status.upper(),
                dis=_disadvantaged(check),
            )
        )

    lines += ["", "## Caveats", ""]
    notes = [f"- {c}" for c in r.caveats]
    for check in r.tests:
        notes.extend(f"- `{check.id}`: {c}" for c in check.metric.caveats)
    lines += notes or ["- none"]

    meta = r.metadata
    lines += [
        "",
        "## Metadata",
        "",
        f"- dataset fingerprint: `{meta.dataset_fingerprint}`",
        f"- config hash: `{meta.config_hash}`",
        f"- tool version: {meta.tool_version}",
        f"- seed: {meta.seed}",
        f"- timestamp: {meta.timestamp or 'unset'}",
    ]
    if meta.model_fingerprint:
        lines.append(f"- model fingerprint: `{meta.model_fingerprint}`")
    if meta.threshold is not None:
        lines.append(f"- decision threshold: {meta.threshold}")
    return "\n".join(lines) + "\n"


def render_report(r: AuditReport, fmt: str = "json") -> bytes:
    kind = FORMAT_ALIASES.get(fmt)
    if kind is None:
        raise UnknownFormatError(f"unknown report format '{fmt}', expected one of {FORMATS}")
    if not r.tests:
        raise InvalidReportError("an audit report needs at least one test")
    if kind == "json":
        return canonical_json(r.model_dump(mode="json"))
    return render_markdown(r).encode("utf-8")


def load_report(path: Union[str, Path]) -> AuditReport:
    try:
        return AuditReport.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except ValidationError as exc:
        raise InvalidReportError(f"invalid report document {path}: {exc}") from exc
