"""Model files: a versioned, fingerprinted JSON envelope written atomically.

Envelope fields:
- format: always "ad-predict-model"
- format_version: integer, currently 1
- kind: "mnb" | "rf" | "gb" | "ensemble"
- rng_algorithm: name of the seeded generator used in training ("PCG64")
- fingerprint: sha256 of the canonical JSON of `payload`
- payload: the model fields (params, seed, coefficients or node lists)

Tree nodes are `{feature, low, high, value, counts}`; a node with a null
feature is a leaf. Naive Bayes log values may be `-Infinity` when alpha is 0.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Annotated, Any

from pydantic import Field, TypeAdapter, ValidationError

from ad_predict.errors import ModelLoadError, ModelVersionError
from ad_predict.learners.base import RNG_ALGORITHM
from ad_predict.learners.boosting import GbModel
from ad_predict.learners.ensemble import EnsembleModel
from ad_predict.learners.forest import RfModel
from ad_predict.learners.naive_bayes import MnbModel
from ad_predict.logging_config import StructuredLogger

logger = StructuredLogger(__name__)

FORMAT_NAME = "ad-predict-model"
FORMAT_VERSION = 1

TrainedModel = Annotated[
    MnbModel | RfModel | GbModel | EnsembleModel,
    Field(discriminator="kind"),
]
_model_adapter: TypeAdapter[Any] = TypeAdapter(TrainedModel)


def _canonical(payload: dict[str, Any]) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=True)


def fingerprint(payload: dict[str, Any]) -> str:
    return hashlib.sha256(_canonical(payload).encode("utf-8")).hexdigest()


def save_model(model: MnbModel | RfModel | GbModel | EnsembleModel, path: Path) -> None:
    """Write the model file atomically (temp file + os.replace).

    The same model always produces the same bytes.
    """
    payload = model.model_dump(mode="python")
    envelope = {
        "format": FORMAT_NAME,
        "format_version": FORMAT_VERSION,
        "kind": model.kind,
        "rng_algorithm": RNG_ALGORITHM,
        "fingerprint": fingerprint(payload),
        "payload": payload,
    }

    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    try:
        with open(tmp, "w", encoding="utf-8") as f:
            f.write(json.dumps(envelope, sort_keys=True, indent=1, allow_nan=True))
            f.write("\n")
        os.replace(tmp, path)
    except Exception as e:
        tmp.unlink(missing_ok=True)
        logger.error(
            f"Failed to write model {path}: {e}",
            stage="learners",
            error=str(e),
            error_type=type(e).__name__,
        )
        raise

    logger.info("Model saved", stage="learners", kind=model.kind, path=str(path))


def load_model(path: Path) -> MnbModel | RfModel | GbModel | EnsembleModel:
    """Read and verify a model file.

    Raises:
        ModelVersionError: the file has another format version
        ModelLoadError: unreadable, truncated, tampered or malformed file
    """
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ModelLoadError(str(path), str(e)) from e

    try:
        envelope = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelLoadError(str(path), f"not a model file ({e.msg})") from e

    if not isinstance(envelope, dict) or envelope.get("format") != FORMAT_NAME:
        raise ModelLoadError(str(path), "not a model file")

    version = envelope.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelVersionError(str(path), version, FORMAT_VERSION)

    payload = envelope.get("payload")
    if not isinstance(payload, dict):
        raise ModelLoadError(str(path), "payload missing")
    if envelope.get("fingerprint") != fingerprint(payload):
        logger.warning("Model fingerprint mismatch", stage="learners", path=str(path))
        raise ModelLoadError(str(path), "fingerprint mismatch, file is corrupted")
    if envelope.get("rng_algorithm") != RNG_ALGORITHM:
        raise ModelLoadError(
            str(path), f"trained with unsupported generator {envelope.get('rng_algorithm')!r}"
        )

    try:
        model = _model_adapter.validate_python(payload)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise ModelLoadError(str(path), f"invalid model: {where}: {first['msg']}") from e

    if model.kind != envelope.get("kind"):
        raise ModelLoadError(str(path), "kind does not match payload")

    logger.info("Model loaded", stage="learners", kind=model.kind, path=str(path))
    return model
