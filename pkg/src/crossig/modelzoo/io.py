"""Canonical JSON model files: ``{version, fs, n, channels, meta, layers}``."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .spec import Layer, ModelShapeError, ModelSpec

FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        super().__init__(message if offset is None else f"{message} (byte offset {offset})")


def _plain(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, np.generic):
        return v.item()
    return v


def model_to_dict(spec: ModelSpec) -> dict:
    return {
        "version": FORMAT_VERSION,
        "fs": float(spec.fs),
        "n": int(spec.n),
        "channels": int(spec.channels),
        "meta": json.loads(json.dumps(dict(spec.meta), default=_plain)),
        "layers": [{"type": l.type, **{k: _plain(v) for k, v in l.params.items()}}
                   for l in spec.layers],
    }


def dumps_model(spec: ModelSpec) -> str:
    return json.dumps(model_to_dict(spec), sort_keys=True, indent=1) + "\n"


def model_from_dict(doc) -> ModelSpec:
    if not isinstance(doc, dict):
        raise ModelFormatError("model document must be a JSON object")
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model version {version!r}; expected {FORMAT_VERSION}")
    try:
        layers = []
        for entry in doc["layers"]:
            params = {k: v for k, v in entry.items() if k != "type"}
            layers.append(Layer(entry["type"], params))
        return ModelSpec(tuple(layers), int(doc["n"]), float(doc["fs"]),
                         int(doc.get("channels", 1)), doc.get("meta", {}))
    except KeyError as exc:
        raise ModelFormatError(f"missing field {exc.args[0]!r}") from None
    except (ModelShapeError, ValueError, TypeError) as exc:
        raise ModelFormatError(f"inconsistent model: {exc}") from None


def loads_model(text: str) -> ModelSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[:exc.pos].encode("utf-8"))
        raise ModelFormatError(f"malformed model JSON: {exc.msg}", offset) from None
    return model_from_dict(doc)


def save_model(spec: ModelSpec, path) -> None:
    Path(path).write_text(dumps_model(spec), encoding="utf-8")


def load_model(path) -> ModelSpec:
    return loads_model(Path(path).read_text(encoding="utf-8"))
