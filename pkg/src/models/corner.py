"""Corner polyhedra K_k and their apex cone triangulations.

K_k = conv(0, e_1..e_k, +-e_{k+1}..+-e_d) is the union of the simplices
Delta(eps) = conv(0, e_1..e_k, eps_{k+1} e_{k+1}, ..., eps_d e_d). The
boundary triangulation collects the (d-1)-faces of those simplices lying on
the boundary of K_k; coning each over p_k gives the fan.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .polytope import ConvexPolytope, simplex_from_vertices


@dataclass(frozen=True, eq=False)
class CornerComplex:
    d: int
    k: int
    polyhedron: ConvexPolytope
    apex: np.ndarray
    top_simplices: Tuple[ConvexPolytope, ...]
    bases: Tuple[np.ndarray, ...]  # the boundary (d-1)-simplex under each top simplex

    def locate(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        """Index of the first top simplex containing each point (-1 if none)."""
        x = np.atleast_2d(points)
        out = np.full(x.shape[0], -1)
        for i, s in enumerate(self.top_simplices):
            hit = (out < 0) & s.contains(x, tol)
            out[hit] = i
        return out


def corner_apex(d: int, k: int) -> np.ndarray:
    p = np.zeros(d)
    p[:k] = 1.0 / (2 * d - k + 1)
    return p


def corner_complex(d: int, k: int) -> CornerComplex:
    if not 0 <= k <= d:
        raise ValueError("corner index must satisfy 0 <= k <= d")
    eye = np.eye(d)
    points = [np.zeros(d)] + [eye[j] for j in range(k)]
    points += [s * eye[j] for j in range(k, d) for s in (1.0, -1.0)]
    hull = ConvexPolytope.from_vertices(np.array(points))
    apex = corner_apex(d, k)

    faces: List[np.ndarray] = []
    seen = set()
    for signs in itertools.product((1.0, -1.0), repeat=d - k):
        verts = [np.zeros(d)] + [eye[j] for j in range(k)] + [s * eye[k + i] for i, s in enumerate(signs)]
        verts = np.array(verts)
        for drop in range(d + 1):
            face = np.delete(verts, drop, axis=0)
            if _on_boundary(hull, face):
                key = tuple(sorted(tuple(np.round(v, 12)) for v in face))
                if key not in seen:
                    seen.add(key)
                    faces.append(face)

    tops = tuple(simplex_from_vertices(np.vstack([face, apex])) for face in faces)
    return CornerComplex(d=d, k=k, polyhedron=hull, apex=apex, top_simplices=tops, bases=tuple(faces))


def _on_boundary(hull: ConvexPolytope, face: np.ndarray, tol: float = 1e-12) -> bool:
    vals = hull.facet_values(face)
    return bool(np.any(np.all(np.abs(vals) <= tol, axis=0)))
