from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from ..errors import DegeneratePolytopeError
from .forms import LinearForm
from .sets import BasicClosedSet, SemialgebraicSet, halfspace_constraints

VERTEX_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ConvexPolytope:
    """Polytope carrying both representations.

    Facets are unit-normalized and oriented inward (non-negative on the
    polytope). `equalities` describe the affine hull of lower-dimensional
    polytopes such as the standard simplex.
    """

    vertices: np.ndarray
    facets: Tuple[LinearForm, ...]
    equalities: Tuple[LinearForm, ...] = ()

    @property
    def dimension(self) -> int:
        return int(self.vertices.shape[1])

    @property
    def intrinsic_dimension(self) -> int:
        return self.dimension - len(self.equalities)

    @property
    def bbox(self) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
        return tuple(self.vertices.min(axis=0).tolist()), tuple(self.vertices.max(axis=0).tolist())

    @property
    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def facet_values(self, points: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(points, dtype=float))
        if not self.facets:
            return np.zeros((x.shape[0], 0))
        normals = np.array([f.normal for f in self.facets])
        consts = np.array([f.constant for f in self.facets])
        return x @ normals.T + consts

    def margin(self, points: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(points, dtype=float))
        vals = self.facet_values(x)
        out = vals.min(axis=1) if vals.shape[1] else np.full(x.shape[0], np.inf)
        for eq in self.equalities:
            out = np.minimum(out, -np.abs(eq(x)))
        return out

    def violation(self, points: np.ndarray) -> np.ndarray:
        return np.maximum(0.0, -self.margin(points))

    def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        x = np.atleast_2d(np.asarray(points, dtype=float))
        ok = np.all(self.facet_values(x) >= -tol, axis=1)
        for eq in self.equalities:
            ok &= np.abs(eq(x)) <= tol
        return ok

    def facet_vertices(self, index: int, tol: float = VERTEX_TOL) -> np.ndarray:
        on = np.abs(self.facets[index](self.vertices)) <= tol
        return self.vertices[on]

    def chebyshev_center(self) -> Tuple[np.ndarray, float]:
        """Largest inscribed ball (center, radius) by linear programming."""
        n = self.dimension
        normals = np.array([f.normal for f in self.facets])
        consts = np.array([f.constant for f in self.facets])
        norms = np.linalg.norm(normals, axis=1)
        # a.c + b >= r |a|  <=>  -a.c + |a| r <= b
        a_ub = np.hstack([-normals, norms[:, None]])
        cost = np.zeros(n + 1)
        cost[-1] = -1.0
        bounds = [(None, None)] * n + [(0.0, None)]
        a_eq = b_eq = None
        if self.equalities:
            a_eq = np.array([np.append(e.normal, 0.0) for e in self.equalities])
            b_eq = np.array([-e.constant for e in self.equalities])
        res = linprog(cost, A_ub=a_ub, b_ub=consts, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
        if not res.success:
            raise DegeneratePolytopeError("models", message=f"Chebyshev center LP failed: {res.message}")
        return np.asarray(res.x[:n]), float(res.x[n])

    def as_semialgebraic(self) -> SemialgebraicSet:
        cons = halfspace_constraints(self.facets) + tuple((e.to_polynomial(), "=0") for e in self.equalities)
        return SemialgebraicSet(self.dimension, (BasicClosedSet(self.dimension, cons),), bbox=self.bbox)

    def check_representations(self, tol: float = VERTEX_TOL) -> List[str]:
        """Return a list of V/H inconsistencies (empty when consistent)."""
        issues: List[str] = []
        vals = self.facet_values(self.vertices)
        if vals.size and vals.min() < -tol:
            issues.append(f"vertex violates a facet by {-vals.min():.3e}")
        for i in range(len(self.facets)):
            support = self.facet_vertices(i, tol)
            if support.shape[0] == 0:
                issues.append(f"facet {i} supports no vertex")
                continue
            rank = np.linalg.matrix_rank(support[1:] - support[0], tol=tol) + 1 if support.shape[0] > 1 else 1
            if rank < self.intrinsic_dimension:
                issues.append(f"facet {i} supports only {rank} affinely independent vertices")
        return issues

    def to_json(self) -> Dict[str, Any]:
        out = self.as_semialgebraic().to_json()
        out["vertices"] = self.vertices.tolist()
        out["facets"] = [f.to_json() for f in self.facets]
        out["equalities"] = [e.to_json() for e in self.equalities]
        return out

    @classmethod
    def from_json(cls, raw: Mapping[str, Any]) -> "ConvexPolytope":
        """Full JSON, or just {"vertices": ...} for a full-dimensional hull."""
        if "facets" not in raw:
            return cls.from_vertices(raw["vertices"])
        return cls(
            vertices=np.asarray(raw["vertices"], dtype=float),
            facets=tuple(LinearForm.from_json(f) for f in raw["facets"]),
            equalities=tuple(LinearForm.from_json(e) for e in raw.get("equalities", [])),
        )

    @classmethod
    def from_vertices(cls, vertices: Sequence[Sequence[float]]) -> "ConvexPolytope":
        """Full-dimensional polytope from points; facets via qhull."""
        pts = np.asarray(vertices, dtype=float)
        n = pts.shape[1]
        if n == 1:
            lo, hi = float(pts.min()), float(pts.max())
            if hi - lo <= VERTEX_TOL:
                raise DegeneratePolytopeError("models", message="interval has no interior")
            return cls(np.array([[lo], [hi]]), (LinearForm((1.0,), -lo), LinearForm((-1.0,), hi)))
        try:
            hull = ConvexHull(pts)
        except Exception as exc:
            raise DegeneratePolytopeError("models", message=f"convex hull failed: {exc}")
        verts = pts[np.sort(hull.vertices)]
        facets: List[LinearForm] = []
        for eq in hull.equations:
            # qhull: normal . x + offset <= 0 inside
            form = LinearForm(tuple(float(-c) for c in eq[:-1]), float(-eq[-1])).normalized()
            if not any(form.same_hyperplane(f) for f in facets):
                facets.append(form)
        return cls(verts, tuple(facets))


def simplex_vertices(d: int) -> np.ndarray:
    """0, e_1, ..., e_d."""
    return np.vstack([np.zeros(d), np.eye(d)])


def simplex_from_vertices(vertices: np.ndarray, positive_at: Optional[np.ndarray] = None) -> ConvexPolytope:
    """Full-dimensional simplex with facets opposite each vertex."""
    verts = np.asarray(vertices, dtype=float)
    n = verts.shape[1]
    if verts.shape[0] != n + 1:
        raise DegeneratePolytopeError("models", message="a simplex in R^n needs n + 1 vertices")
    if n == 1:
        return ConvexPolytope.from_vertices(verts)
    inner = verts.mean(axis=0) if positive_at is None else positive_at
    facets = []
    for i in range(n + 1):
        others = np.delete(verts, i, axis=0)
        try:
            facets.append(LinearForm.through_points(others, positive_at=inner))
        except ValueError:
            raise DegeneratePolytopeError("models", message="simplex vertices are affinely dependent")
    return ConvexPolytope(verts, tuple(facets))
