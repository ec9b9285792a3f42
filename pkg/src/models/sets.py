"""Semialgebraic set descriptions and membership.

Membership semantics are on raw defining polynomials: a point is in a basic
set with tolerance `tol` when every `>=0` constraint is >= -tol, every `>0`
constraint is > -tol and every `=0` constraint is within +-tol.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..polycore import Polynomial

RELATIONS = (">=0", ">0", "=0")


@dataclass(frozen=True)
class BasicClosedSet:
    dimension: int
    constraints: Tuple[Tuple[Polynomial, str], ...]

    def __post_init__(self) -> None:
        for poly, rel in self.constraints:
            if poly.dimension != self.dimension:
                raise ValueError("constraint polynomial dimension differs from the set's")
            if rel not in RELATIONS:
                raise ValueError(f"unknown relation {rel!r}")

    def values(self, points: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(points, dtype=float))
        if not self.constraints:
            return np.zeros((x.shape[0], 0))
        return np.column_stack([p.evaluate(x) for p, _ in self.constraints])

    def _signed(self, points: np.ndarray) -> np.ndarray:
        vals = self.values(points)
        eq = np.array([rel == "=0" for _, rel in self.constraints], dtype=bool)
        signed = vals.copy()
        signed[:, eq] = -np.abs(vals[:, eq])
        return signed

    def margin(self, points: np.ndarray) -> np.ndarray:
        """Smallest signed constraint residual (positive inside, for open use)."""
        signed = self._signed(points)
        if signed.shape[1] == 0:
            return np.full(signed.shape[0], np.inf)
        return signed.min(axis=1)

    def violation(self, points: np.ndarray) -> np.ndarray:
        return np.maximum(0.0, -self.margin(points))

    def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        vals = self.values(points)
        ok = np.ones(vals.shape[0], dtype=bool)
        for j, (_, rel) in enumerate(self.constraints):
            if rel == ">=0":
                ok &= vals[:, j] >= -tol
            elif rel == ">0":
                ok &= vals[:, j] > -tol
            else:
                ok &= np.abs(vals[:, j]) <= tol
        return ok

    def to_json(self) -> Dict[str, Any]:
        return {"constraints": [{"poly": p.to_json(), "rel": rel} for p, rel in self.constraints]}

    @classmethod
    def from_json(cls, raw: Mapping[str, Any], dimension: int) -> "BasicClosedSet":
        cons = tuple((Polynomial.from_json(c["poly"]), str(c["rel"])) for c in raw["constraints"])
        return cls(dimension, cons)


@dataclass(frozen=True)
class SemialgebraicSet:
    """Finite union of basic closed sets.

    `shape` optionally tags well-known sets ({"kind": "ball"|"sphere",
    "center", "radius"}) so samplers can draw from them directly.
    """

    dimension: int
    union: Tuple[BasicClosedSet, ...]
    bbox: Optional[Tuple[Tuple[float, ...], Tuple[float, ...]]] = None
    shape: Optional[Mapping[str, Any]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        for part in self.union:
            if part.dimension != self.dimension:
                raise ValueError("basic set dimension differs from the union's")

    def margin(self, points: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(points, dtype=float))
        if not self.union:
            return np.full(x.shape[0], -np.inf)
        return np.max(np.column_stack([b.margin(x) for b in self.union]), axis=1)

    def violation(self, points: np.ndarray) -> np.ndarray:
        return np.maximum(0.0, -self.margin(points))

    def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        x = np.atleast_2d(np.asarray(points, dtype=float))
        ok = np.zeros(x.shape[0], dtype=bool)
        for b in self.union:
            ok |= b.contains(x, tol)
        return ok

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"dimension": self.dimension, "union": [b.to_json() for b in self.union]}
        if self.bbox is not None:
            out["bbox"] = [list(self.bbox[0]), list(self.bbox[1])]
        if self.shape is not None:
            out["shape"] = dict(self.shape)
        return out


def halfspace_constraints(forms: Sequence[Any]) -> Tuple[Tuple[Polynomial, str], ...]:
    return tuple((f.to_polynomial(), ">=0") for f in forms)


def contains(set_: Any, point: np.ndarray, tol: float = 0.0) -> bool:
    """Membership of a single point in a SemialgebraicSet or ConvexPolytope."""
    p = np.asarray(point, dtype=float)
    if p.shape[-1] != set_.dimension:
        raise ValueError(f"point has {p.shape[-1]} coordinates, set lives in R^{set_.dimension}")
    return bool(set_.contains(p[None, :], tol)[0])


def semialgebraic_from_json(raw: Mapping[str, Any]) -> SemialgebraicSet:
    dim = int(raw["dimension"])
    union = tuple(BasicClosedSet.from_json(b, dim) for b in raw["union"])
    bbox = None
    if raw.get("bbox") is not None:
        lo, hi = raw["bbox"]
        bbox = (tuple(float(v) for v in lo), tuple(float(v) for v in hi))
    return SemialgebraicSet(dim, union, bbox=bbox, shape=raw.get("shape"))
