from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..gradcore import GraphBuilder, Ref

KINDS = ("identity", "dft", "linear", "seasonal_trend")


class TransformError(ValueError):
    pass


@dataclass(frozen=True)
class TargetRepresentation:
    """A point in a target domain.

    ``labels`` names the entries along the first axis of ``values``: one per
    bin for 1-D domains, one per component row for 2-D (component, time)
    domains.
    """

    domain: str
    values: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        if self.domain not in KINDS:
            raise TransformError(f"unknown domain {self.domain!r}")
        if len(self.labels) != self.values.shape[0]:
            raise TransformError("labels must match the first axis of values")

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    def with_values(self, values) -> "TargetRepresentation":
        values = np.asarray(values, dtype=self.values.dtype)
        if values.shape != self.values.shape:
            raise TransformError(f"shape {values.shape} != {self.values.shape}")
        return TargetRepresentation(self.domain, values, self.labels)


class Transform:
    """Invertible map from the time domain to a target domain.

    Subclasses supply the numeric forward/inverse and the inverse as graph
    ops, so that ``f ∘ T⁻¹`` can be differentiated.
    """

    kind: str = ""
    is_complex: bool = False

    def forward(self, x) -> TargetRepresentation:
        raise NotImplementedError

    def inverse(self, values) -> np.ndarray:
        """Numeric ``T⁻¹``; accepts leading batch axes."""
        raise NotImplementedError

    def inverse_graph(self, builder: GraphBuilder, z: Ref) -> Ref:
        raise NotImplementedError

    def target_shape(self, input_shape: Sequence[int]) -> tuple[int, ...]:
        return tuple(input_shape)

    def input_shape(self, target_shape: Sequence[int]) -> tuple[int, ...]:
        return tuple(target_shape)

    def labels(self, target_shape: Sequence[int]) -> tuple[str, ...]:
        raise NotImplementedError

    def feature_groups(self, target_shape: Sequence[int]) -> list[tuple[str, np.ndarray]]:
        """Selectable features as (label, flat indices into the target values).

        1-D real domains expose each entry; 2-D domains expose whole rows.
        """
        shape = tuple(target_shape)
        labels = self.labels(shape)
        if len(shape) == 1:
            return [(labels[i], np.array([i])) for i in range(shape[0])]
        row = int(np.prod(shape[1:]))
        return [(labels[i], np.arange(i * row, (i + 1) * row)) for i in range(shape[0])]

    def represent(self, values) -> TargetRepresentation:
        values = np.asarray(values)
        return TargetRepresentation(self.kind, values, self.labels(values.shape))

    def zero(self, input_shape: Sequence[int]) -> TargetRepresentation:
        return self.forward(np.zeros(tuple(input_shape)))

    def to_dict(self) -> dict:
        return {"kind": self.kind}


class IdentityTransform(Transform):
    kind = "identity"

    def __init__(self, fs: float | None = None):
        self.fs = fs

    def forward(self, x) -> TargetRepresentation:
        x = np.asarray(x, dtype=np.float64)
        return TargetRepresentation("identity", x.copy(), self.labels(x.shape))

    def inverse(self, values) -> np.ndarray:
        return np.real(np.asarray(values)).astype(np.float64)

    def inverse_graph(self, builder, z):
        return z

    def labels(self, target_shape):
        if len(target_shape) == 1:
            if self.fs:
                return tuple(f"{i / self.fs:.4f}s" for i in range(target_shape[0]))
            return tuple(f"t{i}" for i in range(target_shape[0]))
        return tuple(f"ch{i}" for i in range(target_shape[0]))

    def to_dict(self):
        return {"kind": self.kind, "fs": self.fs}
