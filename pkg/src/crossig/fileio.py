"""Plain-text signal/dataset files and minimal SVG plots.

Signal CSV: a ``# fs=<Hz> n=<len>`` line, then one row per time step with
one column per channel.  Dataset CSV: ``#`` header lines with key=value
metadata, then one signal per row as ``label,v0,v1,...``.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from . import __version__


class SignalFormatError(ValueError):
    pass


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _parse_header(lines) -> dict:
    meta = {}
    for line in lines:
        for token in line.lstrip("#").split():
            if "=" in token:
                k, v = token.split("=", 1)
                meta[k] = v
    return meta


def write_signal(path, x, fs: float, extra: dict | None = None) -> None:
    x = np.asarray(x, dtype=np.float64)
    cols = x.reshape(1, -1) if x.ndim == 1 else x
    head = f"# fs={fs!r} n={cols.shape[1]}"
    if extra:
        head += "".join(f" {k}={v}" for k, v in extra.items())
    rows = [",".join(repr(float(v)) for v in cols[:, t]) for t in range(cols.shape[1])]
    Path(path).write_text(head + "\n" + "\n".join(rows) + "\n", encoding="utf-8")


def read_signal(path):
    """Returns ``(x, fs)``; x is 1-D for one column, else (channels, time)."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    header = [l for l in lines if l.startswith("#")]
    meta = _parse_header(header)
    if "fs" not in meta:
        raise SignalFormatError(f"{path}: missing '# fs=<Hz> n=<len>' header")
    body = [l for l in lines if l.strip() and not l.startswith("#")]
    try:
        data = np.array([[float(v) for v in l.split(",")] for l in body])
    except ValueError as exc:
        raise SignalFormatError(f"{path}: {exc}") from None
    if data.ndim != 2 or data.size == 0:
        raise SignalFormatError(f"{path}: no samples")
    if "n" in meta and int(meta["n"]) != data.shape[0]:
        raise SignalFormatError(f"{path}: header says n={meta['n']} but found {data.shape[0]} rows")
    x = data[:, 0] if data.shape[1] == 1 else data.T.copy()
    return x, float(meta["fs"])


def write_dataset(path, signals, labels, meta: dict) -> None:
    head = ["# crossig dataset", f"# version={__version__}"]
    head += [f"# {k}={v}" for k, v in sorted(meta.items())]
    rows = [f"{int(lab)}," + ",".join(repr(float(v)) for v in sig)
            for sig, lab in zip(np.asarray(signals), labels)]
    Path(path).write_text("\n".join(head + rows) + "\n", encoding="utf-8")


def read_dataset(path):
    """Returns ``(signals, labels, meta)``."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    meta = _parse_header([l for l in lines if l.startswith("#")])
    body = [l for l in lines if l.strip() and not l.startswith("#")]
    try:
        rows = [[float(v) for v in l.split(",")] for l in body]
    except ValueError as exc:
        raise SignalFormatError(f"{path}: {exc}") from None
    if not rows or len({len(r) for r in rows}) != 1:
        raise SignalFormatError(f"{path}: rows must be non-empty and equally long")
    arr = np.array(rows)
    return arr[:, 1:], arr[:, 0].astype(int), meta


def is_dataset(path) -> bool:
    with open(path, encoding="utf-8") as fh:
        return fh.readline().startswith("# crossig dataset")


def svg_stem(values, labels=None, title: str = "", width: int = 720, height: int = 240) -> str:
    """Stem chart of ``values`` as a standalone SVG document."""
    v = np.asarray(values, dtype=np.float64).reshape(-1)
    pad = 30
    span = float(np.max(np.abs(v))) or 1.0
    mid = height / 2
    step = (width - 2 * pad) / max(len(v), 1)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<text x="{pad}" y="16" font-size="12">{title}</text>',
             f'<line x1="{pad}" y1="{mid}" x2="{width - pad}" y2="{mid}" stroke="#888"/>']
    for i, val in enumerate(v):
        x = pad + (i + 0.5) * step
        y = mid - val / span * (mid - pad)
        parts.append(f'<line x1="{x:.2f}" y1="{mid}" x2="{x:.2f}" y2="{y:.2f}" stroke="#1f77b4"/>')
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="1.5" fill="#1f77b4"/>')
    if labels is not None and len(labels):
        parts.append(f'<text x="{pad}" y="{height - 6}" font-size="10">{labels[0]}</text>')
        parts.append(f'<text x="{width - pad}" y="{height - 6}" font-size="10" '
                     f'text-anchor="end">{labels[-1]}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
