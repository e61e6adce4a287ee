"""Document loading and output helpers shared by the commands."""

import functools
import logging
from pathlib import Path
from typing import Any, Callable, List, Optional, Type, TypeVar

import typer
from pydantic import BaseModel, ValidationError

from src.core.errors import FairnessError, InvalidConfigError, InvalidParamError
from src.schemas.audit import AuditConfig, Verdict

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAIL = 2
EXIT_WARN = 3

VERDICT_EXIT_CODES = {"pass": EXIT_OK, "fail": EXIT_FAIL, "warn": EXIT_WARN}


def exit_code_for(verdict: Verdict) -> int:
    return VERDICT_EXIT_CODES[verdict]


def load_document(path: Path, model: Type[M]) -> M:
    try:
        return model.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as exc:
        raise InvalidConfigError(f"invalid {model.__name__} document {path}: {exc}") from exc


def load_audit_config(path: Optional[Path]) -> AuditConfig:
    if path is None:
        logger.warning("no audit config given; every threshold is unset and tests are skipped")
        return AuditConfig()
    return load_document(path, AuditConfig)


def parse_inline_or_file(text: Optional[str], model: Type[M]) -> Optional[M]:
    """Accept either inline JSON or a path to a JSON file."""
    if text is None:
        return None
    inline = text.lstrip().startswith("{")
    raw = text if inline else Path(text).read_text(encoding="utf-8")
    try:
        return model.model_validate_json(raw)
    except ValidationError as exc:
        raise InvalidConfigError(f"invalid {model.__name__}: {exc}") from exc


def parse_grid(text: str) -> List[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise InvalidParamError(f"cannot parse grid '{text}': {exc}") from exc
    if not values:
        raise InvalidParamError("grid must list at least one value")
    return values


def guarded(func: Callable[..., Optional[int]]) -> Callable[..., Optional[int]]:
    """Turn expected input failures into a one-line message and exit code 1."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Optional[int]:
        try:
            return func(*args, **kwargs)
        except (FairnessError, ValidationError, OSError, UnicodeDecodeError) as exc:
            logger.debug("command failed", exc_info=True)
            typer.echo(f"error: {type(exc).__name__}: {exc}", err=True)
            raise typer.Exit(code=EXIT_ERROR) from exc

    return wrapper
