from __future__ import annotations

import json

from .base import IdentityTransform, Transform, TransformError
from .dft import DFTTransform
from .linear import LinearTransform
from .seasonal import SeasonalTrendTransform

FIELDS = ("kind", "n", "fs", "period", "W", "A", "seed", "fit")


def transform_to_dict(t: Transform) -> dict:
    """Flat document with every field present (null where not applicable)."""
    d = dict.fromkeys(FIELDS)
    raw = t.to_dict()
    d["kind"] = raw["kind"]
    for key in ("n", "fs", "period", "W", "A"):
        if key in raw:
            d[key] = raw[key]
    if isinstance(t, LinearTransform):
        d["seed"] = t.meta.get("seed")
        d["fit"] = t.meta or None
    return d


def transform_from_dict(d: dict) -> Transform:
    kind = d.get("kind")
    if kind == "identity":
        return IdentityTransform(fs=d.get("fs"))
    if kind == "dft":
        return DFTTransform(n=d.get("n"), fs=d.get("fs") or 1.0)
    if kind == "linear":
        if d.get("W") is None:
            raise TransformError("linear transform document needs W")
        return LinearTransform(d["W"], d.get("A"), meta=d.get("fit") or {})
    if kind == "seasonal_trend":
        if d.get("period") is None:
            raise TransformError("seasonal_trend transform document needs period")
        return SeasonalTrendTransform(d["period"], fs=d.get("fs"))
    raise TransformError(f"unknown transform kind {kind!r}")


def transform_to_json(t: Transform) -> str:
    return json.dumps(transform_to_dict(t), sort_keys=True, indent=2)


def transform_from_json(text: str) -> Transform:
    return transform_from_dict(json.loads(text))


def make_transform(kind: str, n: int | None = None, fs: float = 1.0,
                   period: int | None = None) -> Transform:
    if kind == "identity":
        return IdentityTransform(fs=fs)
    if kind == "dft":
        return DFTTransform(n=n, fs=fs)
    if kind == "seasonal_trend":
        if period is None:
            raise TransformError("seasonal_trend needs a period")
        return SeasonalTrendTransform(period, fs=fs)
    if kind == "linear":
        raise TransformError("linear transforms are fitted or loaded from JSON")
    raise TransformError(f"unknown transform kind {kind!r}")
