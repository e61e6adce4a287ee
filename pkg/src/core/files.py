import logging
import os
import tempfile
from pathlib import Path
from typing import Dict, List, Mapping, Union

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _stage(target: Path, payload: bytes) -> str:
    """Write payload to a fsynced temp file next to target and return its name."""
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
            fh.flush()
            os.fsync(fh.fileno())
    except BaseException:
        os.unlink(tmp_name)
        raise
    return tmp_name


def write_bytes_atomic(path: PathLike, payload: bytes) -> Path:
    """Write to a sibling temp file, fsync, then rename over the target."""
    return write_all_atomic({path: payload})[0]


def write_text_atomic(path: PathLike, text: str) -> Path:
    return write_bytes_atomic(path, text.encode("utf-8"))


def write_all_atomic(outputs: Mapping[PathLike, bytes]) -> List[Path]:
    """
    Write several files as one unit. Every payload is staged before any
    target is touched; if a rename then fails, targets created by this call
    are removed again and untouched targets keep their old content.
    """
    staged: Dict[Path, str] = {}
    try:
        for path, payload in outputs.items():
            staged[Path(path)] = _stage(Path(path), payload)
    except BaseException:
        for tmp_name in staged.values():
            os.unlink(tmp_name)
        raise

    created: List[Path] = []
    pending = dict(staged)
    try:
        for target, tmp_name in staged.items():
            existed = target.exists()
            os.replace(tmp_name, target)
            del pending[target]
            if not existed:
                created.append(target)
    except BaseException:
        for tmp_name in pending.values():
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
        for target in created:
            target.unlink(missing_ok=True)
        raise

    for target, payload in zip(staged, outputs.values()):
        logger.debug("wrote %d bytes to %s", len(payload), target)
    return list(staged)
