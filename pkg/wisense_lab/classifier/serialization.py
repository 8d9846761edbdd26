"""Model files: b"WSLM", one JSON header line, then little-endian float64 parameters.

Payload order: feature_mean, feature_scale, weights (row-major), bias, loss_trace.
"""

import json
import logging
from pathlib import Path
from typing import Union

import numpy as np

from wisense_lab.classifier.model import ARCHITECTURE, Model, TrainingHyper
from wisense_lab.errors import (
    BadMagicError,
    CaptureFormatError,
    PayloadLengthError,
    TruncatedPayloadError,
    VersionMismatchError,
)

logger = logging.getLogger(__name__)

MODEL_MAGIC = b"WSLM"
MODEL_VERSION = 1
_FLOAT = np.dtype("<f8")


def save_model(path: Union[str, Path], model: Model) -> None:
    header = {
        "version": MODEL_VERSION,
        "architecture": ARCHITECTURE,
        "n_classes": model.n_classes,
        "n_features": model.n_features,
        "n_loss": len(model.loss_trace),
        "fft_len": model.fft_len,
        "n_vectors": model.n_vectors,
        "best_epoch": model.best_epoch,
        "class_names": list(model.class_names),
        "hyper": model.hyper.to_dict(),
    }
    payload = np.concatenate([
        model.feature_mean.ravel(),
        model.feature_scale.ravel(),
        model.weights.ravel(),
        model.bias.ravel(),
        np.asarray(model.loss_trace, dtype=float),
    ]).astype(_FLOAT)

    path = Path(path)
    with open(path, "wb") as f:
        f.write(MODEL_MAGIC)
        f.write(json.dumps(header, sort_keys=True).encode("utf-8") + b"\n")
        f.write(payload.tobytes())
    logger.info("model written to %s", path)


def load_model(path: Union[str, Path]) -> Model:
    raw = Path(path).read_bytes()
    if raw[:4] != MODEL_MAGIC:
        raise BadMagicError(f"not a model file: magic {raw[:4]!r}", "magic")

    end = raw.find(b"\n", 4)
    if end < 0:
        raise TruncatedPayloadError("model header is not terminated", "header")
    try:
        header = json.loads(raw[4:end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CaptureFormatError(f"unreadable model header: {e}", "header") from e

    if header.get("version") != MODEL_VERSION:
        raise VersionMismatchError(
            f"model version {header.get('version')} is not {MODEL_VERSION}", "version"
        )
    if header.get("architecture") != ARCHITECTURE:
        raise CaptureFormatError(
            f"unknown architecture {header.get('architecture')!r}", "architecture"
        )

    n_c, n_f, n_loss = header["n_classes"], header["n_features"], header["n_loss"]
    expected = 2 * n_f + n_c * n_f + n_c + n_loss
    payload = raw[end + 1:]
    if len(payload) < expected * _FLOAT.itemsize:
        raise TruncatedPayloadError(
            f"model payload has {len(payload)} bytes, expected {expected * _FLOAT.itemsize}",
            "payload",
        )
    if len(payload) != expected * _FLOAT.itemsize:
        raise PayloadLengthError(
            f"model payload has {len(payload)} bytes, expected {expected * _FLOAT.itemsize}",
            "payload",
        )

    values = np.frombuffer(payload, dtype=_FLOAT).astype(float)
    sections = np.split(values, np.cumsum([n_f, n_f, n_c * n_f, n_c]))
    return Model(
        weights=sections[2].reshape(n_c, n_f),
        bias=sections[3],
        feature_mean=sections[0],
        feature_scale=sections[1],
        hyper=TrainingHyper.from_dict(header["hyper"]),
        loss_trace=sections[4].tolist(),
        class_names=header["class_names"],
        fft_len=header["fft_len"],
        n_vectors=header["n_vectors"],
        best_epoch=header["best_epoch"],
    )
