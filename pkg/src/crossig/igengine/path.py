from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..transforms import TargetRepresentation

RULES = ("right_riemann", "midpoint", "trapezoid")
PATHS = ("linear",)


def quadrature(n_steps: int, rule: str = "right_riemann"):
    """Nodes ``t`` in [0, 1] and weights summing to 1 for the path integral."""
    if int(n_steps) != n_steps or n_steps < 1:
        raise ValueError(f"n_steps must be a positive integer, got {n_steps!r}")
    n = int(n_steps)
    if rule == "right_riemann":
        return np.arange(1, n + 1) / n, np.full(n, 1.0 / n)
    if rule == "midpoint":
        return (np.arange(n) + 0.5) / n, np.full(n, 1.0 / n)
    if rule == "trapezoid":
        w = np.full(n + 1, 1.0 / n)
        w[0] = w[-1] = 0.5 / n
        return np.arange(n + 1) / n, w
    raise ValueError(f"unknown quadrature rule {rule!r}; expected one of {RULES}")


@dataclass(frozen=True)
class PathSpec:
    """Straight line from ``baseline`` to the input point.

    ``baseline=None`` means the zero signal mapped into the target domain.
    """

    baseline: TargetRepresentation | None = None
    n_steps: int = 64
    rule: str = "right_riemann"
    path: str = "linear"

    def __post_init__(self):
        quadrature(self.n_steps, self.rule)
        if self.path not in PATHS:
            raise ValueError(f"only linear paths are supported, got {self.path!r}")

    def nodes(self):
        return quadrature(self.n_steps, self.rule)
