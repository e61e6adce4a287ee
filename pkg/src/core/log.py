"""Logging setup for command-line runs."""

import logging
import sys

_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def configure_logging(level: str = "INFO") -> None:
    """Route all `src.*` loggers to a single handler on the current stderr at `level`."""
    root = logging.getLogger("src")
    root.setLevel(level.upper())
    for old in [h for h in root.handlers if getattr(h, "_fairaudit", False)]:
        root.removeHandler(old)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(_FORMAT, datefmt="%H:%M:%S"))
    handler._fairaudit = True  # type: ignore[attr-defined]
    root.addHandler(handler)
    root.propagate = False
