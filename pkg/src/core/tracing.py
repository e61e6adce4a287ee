"""Tracing utilities with optional LangSmith integration."""

from __future__ import annotations

from collections.abc import Callable
from typing import Any, TypeVar

from src.core.config import settings

try:
    from langsmith import traceable as _traceable  # type: ignore
except ImportError:  # pragma: no cover - executed when LangSmith missing
    _traceable = None

F = TypeVar("F", bound=Callable[..., Any])


def tracing_active() -> bool:
    return _traceable is not None and settings.langsmith_tracing


def traced(name: str) -> Callable[[F], F]:
    """
    Record calls of the decorated pipeline step as LangSmith runs.

    The decision is taken at import time: with tracing switched off (the
    default) the function is returned untouched.
    """

    def decorator(func: F) -> F:
        if not tracing_active():
            return func
        return _traceable(name=name, run_type="chain")(func)  # type: ignore[misc]

    return decorator


def describe_tracing() -> str:
    """One-line tracing status for startup diagnostics."""
    if not settings.langsmith_tracing:
        return "LangSmith tracing is disabled"
    if _traceable is None:
        return "LangSmith tracing requested but langsmith is not installed"
    missing = [
        name
        for name, value in (
            ("LANGSMITH_API_KEY", settings.langsmith_api_key),
            ("LANGSMITH_PROJECT", settings.langsmith_project),
        )
        if not value
    ]
    if missing:
        return f"LangSmith not fully configured, missing: {', '.join(missing)}"
    return (
        f"LangSmith tracing to project {settings.langsmith_project} "
        f"at {settings.langsmith_endpoint}"
    )


__all__ = ["describe_tracing", "traced", "tracing_active"]
