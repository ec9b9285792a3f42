from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Tuple, Union

import numpy as np

from ..errors import InvalidInstanceError, UndefinedAtCenterError
from ..models import ConvexPolytope, LinearForm

CENTER_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class RadialRetraction:
    """rho(x) = z + (x - z) / max_i (h_i(z) - h_i(x)) / h_i(z).

    The ray from the center z through x leaves the simplex through exactly one
    boundary point; rho sends x there and fixes the boundary pointwise.
    """

    forms: Tuple[LinearForm, ...]
    center: np.ndarray
    at_center: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        z = np.asarray(self.center, dtype=float)
        object.__setattr__(self, "center", z)
        at_center = np.array([float(h(z)) for h in self.forms])
        if np.any(at_center <= 0):
            raise InvalidInstanceError("cover", message="retraction center must be interior", details={"values": at_center.tolist()})
        object.__setattr__(self, "at_center", at_center)

    def ratios(self, points: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(points, dtype=float))
        vals = np.column_stack([h(x) for h in self.forms])
        return (self.at_center - vals) / self.at_center

    def active_facet(self, points: np.ndarray) -> np.ndarray:
        """Index of the facet hit by the ray (lowest index on ties)."""
        return np.argmax(self.ratios(points), axis=1)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(points, dtype=float))
        dist = np.linalg.norm(x - self.center, axis=1)
        if np.any(dist <= CENTER_TOL):
            k = int(np.argmin(dist))
            raise UndefinedAtCenterError("cover", message="radial retraction is undefined at its center", details={"index": k})
        scale = np.max(self.ratios(x), axis=1)
        return self.center + (x - self.center) / scale[:, None]


def radial_retraction(simplex: Union[ConvexPolytope, Sequence[LinearForm]], center: Sequence[float]) -> RadialRetraction:
    forms = tuple(simplex.facets) if isinstance(simplex, ConvexPolytope) else tuple(simplex)
    return RadialRetraction(forms, np.asarray(center, dtype=float))
