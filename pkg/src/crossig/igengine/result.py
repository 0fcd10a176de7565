from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..transforms import Transform, onesided, transform_to_dict


@dataclass(frozen=True)
class AttributionResult:
    """Per-feature IG scores in a target domain with their audit trail."""

    scores: np.ndarray
    domain: str
    labels: tuple[str, ...]
    f_input: float
    f_baseline: float
    n_steps: int
    rule: str
    algorithm: str
    transform: Transform | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not np.all(np.isfinite(self.scores)):
            raise ArithmeticError("attribution scores are not finite")

    @property
    def completeness_residual(self) -> float:
        return float(np.sum(self.scores) - (self.f_input - self.f_baseline))

    def features(self) -> tuple[tuple[str, ...], np.ndarray]:
        """Scores per selectable feature: merged conjugate bins, or summed rows."""
        if self.transform is None:
            return self.labels, np.asarray(self.scores).reshape(len(self.labels), -1).sum(axis=1)
        groups = self.transform.feature_groups(self.scores.shape)
        flat = np.asarray(self.scores).reshape(-1)
        return tuple(g[0] for g in groups), np.array([flat[idx].sum() for _, idx in groups])

    def onesided(self):
        """(frequencies in Hz, merged scores) for dft results."""
        if self.domain != "dft":
            raise ValueError("one-sided view only applies to dft attributions")
        fs = getattr(self.transform, "fs", 1.0)
        return onesided(self.scores, fs)

    def component_scores(self) -> np.ndarray:
        """Per-row sums over time for (component, time) domains."""
        if self.scores.ndim != 2:
            raise ValueError("component scores need a (component, time) attribution")
        return self.scores.sum(axis=1)

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "transform": transform_to_dict(self.transform) if self.transform is not None else {"kind": self.domain},
            "labels": list(self.labels),
            "scores": np.asarray(self.scores).tolist(),
            "f_input": self.f_input,
            "f_baseline": self.f_baseline,
            "completeness_residual": self.completeness_residual,
            "n_steps": self.n_steps,
            "rule": self.rule,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def completeness_residual(result: AttributionResult) -> float:
    """Sum of scores minus the output difference it should account for."""
    return result.completeness_residual
