"""Apex instances: a polytope K, a base simplex on its boundary and an interior apex."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..errors import DegeneratePolytopeError, InvalidInstanceError
from ..models import ConvexPolytope, CornerComplex, LinearForm, hypercube

logger = logging.getLogger("nash_squeeze.cover")

INSTANCE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class OpenCell:
    """{f > 0 for every form}: an open convex cell given by linear forms."""

    forms: Tuple[LinearForm, ...]

    @property
    def dimension(self) -> int:
        return self.forms[0].dimension

    def margin(self, points: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(points, dtype=float))
        return np.min(np.column_stack([f(x) for f in self.forms]), axis=1)

    def violation(self, points: np.ndarray) -> np.ndarray:
        return np.maximum(0.0, -self.margin(points))

    def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        return self.margin(points) >= -tol


@dataclass(frozen=True, eq=False)
class ApexInstance:
    """K = {g_k >= 0}, base simplex sigma = conv(v_1..v_n), apex p in Int K.

    `forms` already includes h_0 (K is cut down to {h_0 >= 0} so that sigma
    lies on its boundary); `polytope` keeps the K given by the caller.
    h_i vanishes on p and every v_j with j != i and is positive at v_i.
    """

    polytope: ConvexPolytope
    vertices: np.ndarray  # (n, n), row i = v_i
    apex: np.ndarray
    facet_forms: Tuple[LinearForm, ...]
    base_form: LinearForm
    forms: Tuple[LinearForm, ...]

    @property
    def n(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def sigma_hat(self) -> ConvexPolytope:
        return ConvexPolytope(np.vstack([self.apex, self.vertices]), (self.base_form,) + self.facet_forms)

    @property
    def simplex_forms(self) -> Tuple[LinearForm, ...]:
        return (self.base_form,) + self.facet_forms

    @property
    def interior(self) -> OpenCell:
        return OpenCell(self.forms)

    def exterior_cell(self, i: int) -> OpenCell:
        """S_i = Int(K cap the half-spaces {h_j <= 0}, j != i)."""
        others = tuple(h.flipped() for j, h in enumerate(self.facet_forms) if j != i)
        return OpenCell(self.forms + others)

    def issues(self, tol: float = INSTANCE_TOL) -> List[str]:
        out: List[str] = []
        v, p = self.vertices, self.apex
        for i, h in enumerate(self.facet_forms):
            if abs(float(h(p))) > tol:
                out.append(f"h_{i + 1}(p) = {float(h(p)):.3e}")
            vals = h(v)
            for j in range(self.n):
                if j != i and abs(float(vals[j])) > tol:
                    out.append(f"h_{i + 1}(v_{j + 1}) = {float(vals[j]):.3e}")
            if vals[i] <= tol:
                out.append(f"h_{i + 1}(v_{i + 1}) is not positive")
        if np.max(np.abs(self.base_form(v))) > tol:
            out.append("h_0 does not vanish on the base simplex")
        if float(self.base_form(p)) <= tol:
            out.append("h_0(p) is not positive")
        for k, g in enumerate(self.forms):
            if float(g(p)) <= tol:
                out.append(f"apex is not interior: g_{k + 1}(p) = {float(g(p)):.3e}")
            if np.min(g(v)) < -tol:
                out.append(f"base vertex outside K: g_{k + 1}")
        return out

    def validate(self) -> "ApexInstance":
        problems = self.issues()
        if problems:
            raise InvalidInstanceError("cover", message="apex instance invariants fail", details={"issues": problems})
        return self

    @classmethod
    def from_points(cls, polytope: ConvexPolytope, vertices: Sequence[Sequence[float]], apex: Sequence[float]) -> "ApexInstance":
        v = np.atleast_2d(np.asarray(vertices, dtype=float))
        p = np.asarray(apex, dtype=float)
        n = polytope.dimension
        if v.shape != (n, n) or p.shape != (n,):
            raise InvalidInstanceError("cover", message=f"need {n} base vertices and an apex in R^{n}")
        try:
            facet_forms = tuple(
                LinearForm.through_points(np.vstack([p, np.delete(v, i, axis=0)]), positive_at=v[i]) for i in range(n)
            )
            base_form = LinearForm.through_points(v, positive_at=p)
        except ValueError as exc:
            raise InvalidInstanceError("cover", message=f"apex and base simplex are degenerate: {exc}")
        forms = tuple(polytope.facets)
        if not any(base_form.same_hyperplane(g) for g in forms):
            forms = forms + (base_form,)
        inst = cls(polytope, v, p, facet_forms, base_form, forms)
        logger.debug("apex instance", extra={"n": n, "forms": len(forms)})
        return inst.validate()

    @classmethod
    def from_corner(cls, complex_: CornerComplex, index: int) -> "ApexInstance":
        return cls.from_points(complex_.polyhedron, complex_.bases[index], complex_.apex)

    @classmethod
    def unit_triangle_in_square(cls) -> "ApexInstance":
        """K = [0, 3]^2, sigma from (1, 0) to (2, 0), p = (1.5, 1)."""
        square = hypercube(2)
        k = ConvexPolytope.from_vertices(1.5 * square.vertices + 1.5)
        return cls.from_points(k, [[1.0, 0.0], [2.0, 0.0]], [1.5, 1.0])

    def to_json(self) -> Dict[str, Any]:
        return {
            "polytope": self.polytope.to_json(),
            "vertices": self.vertices.tolist(),
            "apex": self.apex.tolist(),
        }

    @classmethod
    def from_json(cls, raw: Mapping[str, Any]) -> "ApexInstance":
        return cls.from_points(ConvexPolytope.from_json(raw["polytope"]), raw["vertices"], raw["apex"])


def exterior_cells(instance: ApexInstance) -> Tuple[OpenCell, ...]:
    return tuple(instance.exterior_cell(i) for i in range(instance.n))


def shared_interior_point(a: ConvexPolytope, b: ConvexPolytope, tol: float = INSTANCE_TOL) -> Optional[np.ndarray]:
    """Chebyshev center of a cap b when it has interior, else None."""
    both = ConvexPolytope(np.vstack([a.vertices, b.vertices]), tuple(a.facets) + tuple(b.facets))
    try:
        center, radius = both.chebyshev_center()
    except DegeneratePolytopeError:
        return None
    return center if radius > tol else None
