from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Mapping, Sequence, Tuple

import numpy as np

from ..polycore import ORDER_CAP


@dataclass(frozen=True, eq=False)
class JetSpec:
    """Prescribed m-jets at strictly increasing anchor times.

    Anchors may sit on the interval ends; `jets[i]` has shape (m + 1, codim)
    with row k the k-th derivative at anchors[i].
    """

    anchors: Tuple[float, ...]
    jets: Tuple[np.ndarray, ...]
    order: int
    interval: Tuple[float, float] = (0.0, 1.0)

    def __post_init__(self) -> None:
        a, b = self.interval
        t = np.asarray(self.anchors, dtype=float)
        if t.size == 0:
            raise ValueError("need at least one anchor")
        if np.any(np.diff(t) <= 0):
            raise ValueError("anchor times must be strictly increasing")
        if t[0] < a or t[-1] > b:
            raise ValueError("anchor times must lie in the interval")
        if not 0 <= self.order <= ORDER_CAP:
            raise ValueError(f"jet order must be in [0, {ORDER_CAP}]")
        if len(self.jets) != t.size:
            raise ValueError("one jet per anchor")
        jets = tuple(np.atleast_2d(np.asarray(j, dtype=float)) for j in self.jets)
        shapes = {j.shape for j in jets}
        if len(shapes) != 1 or jets[0].shape[0] != self.order + 1:
            raise ValueError("all jets need shape (order + 1, codim)")
        object.__setattr__(self, "jets", jets)
        object.__setattr__(self, "anchors", tuple(float(v) for v in t))

    @property
    def codim(self) -> int:
        return int(self.jets[0].shape[1])

    @property
    def n_conditions(self) -> int:
        return len(self.anchors) * (self.order + 1)

    def rhs(self) -> np.ndarray:
        """Stacked conditions, row i * (m + 1) + k = k-th derivative at anchor i."""
        return np.vstack(self.jets)

    @classmethod
    def from_path(cls, path: Any, anchors: Sequence[float], order: int, interval: Tuple[float, float] = (0.0, 1.0)) -> "JetSpec":
        return cls(tuple(anchors), tuple(path.jet(t, order) for t in anchors), order, interval)

    def to_json(self) -> Dict[str, Any]:
        return {
            "anchors": list(self.anchors),
            "jets": [j.tolist() for j in self.jets],
            "order": self.order,
            "interval": list(self.interval),
        }

    @classmethod
    def from_json(cls, raw: Mapping[str, Any]) -> "JetSpec":
        lo, hi = raw.get("interval", (0.0, 1.0))
        return cls(
            tuple(float(t) for t in raw["anchors"]),
            tuple(np.asarray(j, dtype=float) for j in raw["jets"]),
            int(raw["order"]),
            (float(lo), float(hi)),
        )
