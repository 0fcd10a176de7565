"""Insertion/deletion faithfulness curves in a target domain.

Features are the transform's selectable groups (conjugate bin pairs for
the DFT, whole rows for component domains).  Distances are averaged over
random trials within a sample first, then across samples.
"""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..gradcore import forward_eval
from ..igengine import PathSpec, attribute
from ..transforms import TargetRepresentation, Transform
from .prng import Stream

MODES = ("deletion", "insertion")
METHODS = ("ig_ranked", "random")


def feature_count(k_percent: float, n_features: int) -> int:
    """Number of features for ``k_percent``: rounded half up, at least 1."""
    if not 0 < k_percent <= 100:
        raise ValueError(f"k_percent must be in (0, 100], got {k_percent}")
    count = int(np.floor(k_percent / 100.0 * n_features + 0.5))
    return min(max(count, 1), n_features)


def select_top_k(scores, k_percent: float, groups=None) -> np.ndarray:
    """Indices of the top ``k_percent`` features by score, ties to the lower index.

    With ``groups`` (a list of index arrays) each group is one feature scored
    by the sum of its members, and the members of the chosen groups are
    returned.
    """
    scores = np.asarray(scores, dtype=np.float64).reshape(-1)
    if groups is None:
        feat = scores
    else:
        feat = np.array([scores[np.asarray(g)].sum() for g in groups])
    order = np.argsort(-feat, kind="stable")[:feature_count(k_percent, feat.size)]
    chosen = np.sort(order)
    if groups is None:
        return chosen
    return np.sort(np.concatenate([np.asarray(groups[i]) for i in chosen]))


def intervene(transform: Transform, z: TargetRepresentation, indices, mode: str,
              baseline: TargetRepresentation | None = None, original=None) -> np.ndarray:
    """Time-domain signal after deleting or inserting the flat ``indices`` of ``z``.

    When nothing is replaced and ``original`` (the signal ``z`` came from)
    is given, it is returned unchanged instead of ``T⁻¹(T(x))``.
    """
    if mode not in ("delete", "insert", "deletion", "insertion"):
        raise ValueError(f"mode must be delete or insert, got {mode!r}")
    base = np.zeros_like(z.values) if baseline is None else baseline.values
    mask = np.zeros(z.values.size, dtype=bool)
    mask[np.asarray(indices, dtype=int)] = True
    mask = mask.reshape(z.values.shape)
    if mode.startswith("ins"):
        mask = ~mask
    if original is not None and not mask.any():
        return np.array(original, dtype=np.float64)
    return transform.inverse(np.where(mask, base, z.values))


@dataclass(frozen=True)
class CurveRow:
    mode: str
    method: str
    k_percent: float
    mean_distance: float
    std: float
    trials: int


@dataclass(frozen=True)
class InterventionReport:
    rows: tuple[CurveRow, ...]
    seed: int
    n_samples: int
    config: dict = field(default_factory=dict)

    def curve(self, mode: str, method: str):
        sel = [r for r in self.rows if r.mode == mode and r.method == method]
        return np.array([r.k_percent for r in sel]), np.array([r.mean_distance for r in sel])

    def value(self, mode: str, method: str, k_percent: float) -> float:
        for r in self.rows:
            if r.mode == mode and r.method == method and r.k_percent == k_percent:
                return r.mean_distance
        raise KeyError((mode, method, k_percent))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["mode", "method", "k_percent", "mean_distance", "std", "trials"])
        for r in self.rows:
            w.writerow([r.mode, r.method, repr(r.k_percent), repr(r.mean_distance), repr(r.std),
                        r.trials])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"seed": self.seed, "n_samples": self.n_samples, "config": self.config,
                "rows": [r.__dict__ for r in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _sample_distances(graph_for, transform, algorithm, signal, target, k_list, trials, seed,
                      sample_index, path):
    graph = graph_for(target)
    res = attribute(graph, transform, signal, path, algorithm)
    z = transform.forward(signal)
    groups = [g for _, g in transform.feature_groups(z.values.shape)]
    # f(x) rides in the same batch so unchanged signals give exactly zero distance
    mods, keys = [np.asarray(signal, dtype=np.float64)], []
    for ki, k in enumerate(k_list):
        for mode in MODES:
            if k == 0:
                idx = np.array([], dtype=int)
            else:
                idx = select_top_k(res.scores, k, groups)
            mods.append(intervene(transform, z, idx, mode, original=signal))
            keys.append((mode, "ig_ranked", ki))
            for trial in range(trials):
                if k == 0:
                    ridx = np.array([], dtype=int)
                else:
                    stream = Stream(seed, sample_index, trial, ki)
                    pick = stream.sample(len(groups), feature_count(k, len(groups)))
                    ridx = np.concatenate([groups[i] for i in pick])
                mods.append(intervene(transform, z, ridx, mode, original=signal))
                keys.append((mode, "random", ki))
    f_all = np.atleast_1d(forward_eval(graph, {"x": np.stack(mods)}))
    dist = np.abs(f_all[1:] - f_all[0])
    out = {}
    for key, d in zip(keys, dist):
        out.setdefault(key, []).append(d)
    return {key: float(np.mean(v)) for key, v in out.items()}


def run_curve(model, transform: Transform, algorithm: str | None, signals, targets, k_list,
              trials: int = 20, seed: int = 0, n_steps: int = 128, rule: str = "right_riemann",
              workers: int = 1) -> InterventionReport:
    """Deletion and insertion curves for IG-ranked and random feature sets.

    ``model`` is a :class:`~crossig.modelzoo.ModelSpec` and ``targets``
    gives the output index explained for each signal (for the two-class
    classifier, the true label minus one).  The random arm uses a fresh
    stream for every (seed, sample, trial, k) combination.
    """
    k_list = sorted(float(k) for k in k_list)
    signals = np.asarray(signals, dtype=np.float64)
    targets = list(targets)
    if len(targets) != len(signals):
        raise ValueError("need one target per signal")
    cache = {}

    def graph_for(t):
        if t not in cache:
            cache[t] = model.compile(t if model.n_outputs > 1 else None)
        return cache[t]

    for t in sorted(set(targets)):
        graph_for(t)
    path = PathSpec(None, n_steps, rule)

    def one(i):
        return _sample_distances(graph_for, transform, algorithm, signals[i], targets[i], k_list,
                                 trials, seed, i, path)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_sample = list(pool.map(one, range(len(signals))))
    else:
        per_sample = [one(i) for i in range(len(signals))]

    rows = []
    for mode in MODES:
        for method in METHODS:
            for ki, k in enumerate(k_list):
                vals = np.array([s[(mode, method, ki)] for s in per_sample])
                rows.append(CurveRow(mode, method, k, float(vals.mean()), float(vals.std()),
                                     trials if method == "random" else 1))
    config = {"transform": transform.kind, "algorithm": algorithm, "k_list": k_list,
              "trials": trials, "n_steps": n_steps, "rule": rule}
    return InterventionReport(tuple(rows), int(seed), len(signals), config)
