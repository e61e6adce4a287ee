import hashlib
import json
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from src.core.errors import InvalidConfigError, UnsupportedModelVersionError
from src.schemas.model import MODEL_FORMAT_VERSION, LogisticModel


def model_to_json(m: LogisticModel) -> str:
    """Stable JSON: sorted keys, full float precision, trailing newline."""
    return json.dumps(m.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def model_fingerprint(m: LogisticModel) -> str:
    return hashlib.sha256(model_to_json(m).encode("utf-8")).hexdigest()


def model_from_json(text: str) -> LogisticModel:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidConfigError(f"model document is not valid JSON: {exc}") from exc
    version = payload.get("version") if isinstance(payload, dict) else None
    if version != MODEL_FORMAT_VERSION:
        raise UnsupportedModelVersionError(
            f"model format version {version!r} is not supported (expected {MODEL_FORMAT_VERSION})"
        )
    try:
        return LogisticModel.model_validate(payload)
    except ValidationError as exc:
        raise InvalidConfigError(f"invalid model document: {exc}") from exc


def load_model(path: Union[str, Path]) -> LogisticModel:
    return model_from_json(Path(path).read_text(encoding="utf-8"))
