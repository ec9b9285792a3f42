"""The canonical compact models and a few derived sets."""

from __future__ import annotations

import logging
from typing import Optional, Sequence, Union

import numpy as np

from ..polycore import Polynomial
from ..polycore import builders as B
from ..polycore.mapexpr import MapExpr
from .forms import LinearForm
from .polytope import ConvexPolytope, simplex_from_vertices, simplex_vertices
from .sets import BasicClosedSet, SemialgebraicSet

logger = logging.getLogger("nash_squeeze.models")

KINDS = ("ball", "sphere", "simplex_solid", "simplex_std", "hypercube", "cylinder", "prism")

Model = Union[SemialgebraicSet, ConvexPolytope]


def _norm_sq_poly(n: int, center: Sequence[float], radius: float, first: Optional[int] = None) -> Polynomial:
    """radius^2 - sum_{j<first} (x_j - c_j)^2."""
    k = n if first is None else first
    p = Polynomial.const(n, radius * radius)
    for j in range(k):
        xj = Polynomial.variable(n, j).shift(-float(center[j]))
        p = p - xj * xj
    return p


def ball(d: int, radius: float = 1.0, center: Optional[Sequence[float]] = None) -> SemialgebraicSet:
    c = np.zeros(d) if center is None else np.asarray(center, dtype=float)
    poly = _norm_sq_poly(d, c, radius)
    bbox = (tuple((c - radius).tolist()), tuple((c + radius).tolist()))
    shape = {"kind": "ball", "center": c.tolist(), "radius": float(radius)}
    return SemialgebraicSet(d, (BasicClosedSet(d, ((poly, ">=0"),)),), bbox=bbox, shape=shape)


def sphere(d: int, radius: float = 1.0) -> SemialgebraicSet:
    """S^d inside R^{d+1}."""
    n = d + 1
    poly = _norm_sq_poly(n, np.zeros(n), radius)
    bbox = (tuple([-radius] * n), tuple([radius] * n))
    shape = {"kind": "sphere", "center": [0.0] * n, "radius": float(radius)}
    return SemialgebraicSet(n, (BasicClosedSet(n, ((poly, "=0"),)),), bbox=bbox, shape=shape)


def interval(a: float, b: float) -> ConvexPolytope:
    return ConvexPolytope.from_vertices([[a], [b]])


def simplex_solid(d: int) -> ConvexPolytope:
    return simplex_from_vertices(simplex_vertices(d))


def simplex_std(n: int) -> ConvexPolytope:
    """Delta_{n-1} = {lambda_i >= 0, sum lambda = 1} in R^n."""
    verts = np.eye(n)
    facets = tuple(LinearForm(tuple(float(v) for v in np.eye(n)[i]), 0.0) for i in range(n)) if n > 1 else ()
    equality = LinearForm(tuple([1.0 / np.sqrt(n)] * n), -1.0 / np.sqrt(n))
    return ConvexPolytope(verts, facets, (equality,))


def hypercube(d: int) -> ConvexPolytope:
    corners = np.array(np.meshgrid(*[[-1.0, 1.0]] * d, indexing="ij")).reshape(d, -1).T
    facets = []
    for j in range(d):
        e = np.zeros(d)
        e[j] = 1.0
        facets.append(LinearForm(tuple(e.tolist()), 1.0))
        facets.append(LinearForm(tuple((-e).tolist()), 1.0))
    return ConvexPolytope(corners, tuple(facets))


def cylinder(d: int) -> SemialgebraicSet:
    """closed (d-1)-ball times [-1, 1]."""
    if d == 1:
        return ball(1)
    disc = _norm_sq_poly(d, np.zeros(d), 1.0, first=d - 1)
    last = Polynomial.const(d, 1.0) - Polynomial.variable(d, d - 1) * Polynomial.variable(d, d - 1)
    bbox = (tuple([-1.0] * d), tuple([1.0] * d))
    return SemialgebraicSet(d, (BasicClosedSet(d, ((disc, ">=0"), (last, ">=0"))),), bbox=bbox)


def prism(d: int) -> ConvexPolytope:
    """Solid Delta_{d-1} times [-1, 1]."""
    if d == 1:
        return hypercube(1)
    base = simplex_vertices(d - 1)
    verts = np.vstack([np.hstack([base, -np.ones((d, 1))]), np.hstack([base, np.ones((d, 1))])])
    return ConvexPolytope.from_vertices(verts)


def model(kind: str, d: int) -> Model:
    if d < 1:
        raise ValueError("model dimension must be at least 1")
    builders = {
        "ball": ball,
        "sphere": sphere,
        "simplex_solid": simplex_solid,
        "simplex_std": simplex_std,
        "hypercube": hypercube,
        "cylinder": cylinder,
        "prism": prism,
    }
    if kind not in builders:
        raise ValueError(f"unknown model kind {kind!r}; expected one of {', '.join(KINDS)}")
    logger.debug("model built", extra={"kind": kind, "dim": d})
    return builders[kind](d)


def ball_projection(d: int) -> MapExpr:
    """R^{d+1} -> R^d, dropping the last coordinate; maps S^d onto the closed d-ball."""
    rows = np.hstack([np.eye(d), np.zeros((d, 1))])
    return B.affine(rows, np.zeros(d))
