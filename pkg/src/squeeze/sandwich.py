"""Sandwich squeezes: compact sets K with B_d <= A(K) <= B_d(0, R) onto B_d.

The map is g o A where A normalizes K so the unit ball is inscribed, and g is
a radial squeeze whose profile r h(r^2) is at most 1 on [0, R] and reaches 1
at r = 1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..errors import DegeneratePolytopeError, ProfileBoundError
from ..models import ConvexPolytope, hypercube, prism, simplex_vertices
from ..polycore import MapExpr
from ..polycore import builders as B
from ..polycore.mapexpr import compose
from .radial import PROFILE_TOL, RadialSqueeze, radial_poly

logger = logging.getLogger("nash_squeeze.squeeze")

MAX_ESCALATIONS = 4
MIN_INRADIUS = 1e-9
WITNESS_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SandwichCertificate:
    d: int
    normalization: MapExpr
    outer_r2: int  # smallest integer >= max |A(v)|^2 over the witnesses
    r2: int  # the R^2 actually used after escalation
    witnesses: np.ndarray
    squeeze: Optional[RadialSqueeze] = None

    @property
    def outer_radius(self) -> float:
        return math.sqrt(self.r2)

    def check(self) -> bool:
        norms = np.linalg.norm(self.normalization(self.witnesses), axis=1)
        return bool(np.all(norms <= self.outer_radius + WITNESS_TOL))

    def to_json(self) -> Dict[str, Any]:
        a = self.normalization.data
        return {
            "d": self.d,
            "matrix": a["matrix"],
            "offset": a["offset"],
            "outer_r2": self.outer_r2,
            "r2": self.r2,
            "witnesses": self.witnesses.tolist(),
            "squeeze": None if self.squeeze is None else self.squeeze.to_json(),
        }


def _outer_bound(values: np.ndarray) -> int:
    return max(2, int(math.ceil(float(np.max(values)) - 1e-12)))


def escalate(outer_r2: int) -> RadialSqueeze:
    """Smallest admissible peak-rule squeeze with R^2 >= outer_r2."""
    for step in range(MAX_ESCALATIONS + 1):
        r2 = outer_r2 + step
        if (r2 - 1) % 2:
            continue
        sq = radial_poly(r2, rule="peak")
        peak = sq.profile_max()
        if peak <= 1.0 + PROFILE_TOL:
            if step:
                logger.info("escalated R^2", extra={"outer_r2": outer_r2, "r2": r2})
            return sq
        logger.warning("radial profile exceeds 1", extra={"r2": r2, "profile_max": peak})
    raise ProfileBoundError(
        "squeeze",
        message="no admissible R^2 within the escalation cap",
        details={"outer_r2": outer_r2, "cap": MAX_ESCALATIONS},
    )


def squeeze_normalized(normalization: MapExpr, witnesses: np.ndarray) -> Tuple[SandwichCertificate, MapExpr]:
    """g o A for a normalization A that already inscribes the unit ball."""
    d = normalization.codim
    pts = np.atleast_2d(np.asarray(witnesses, dtype=float))
    norms_sq = np.sum(normalization(pts) ** 2, axis=1)
    if d == 1:
        cert = SandwichCertificate(1, normalization, 1, 1, pts)
        return cert, normalization
    outer = _outer_bound(norms_sq)
    sq = escalate(outer)
    cert = SandwichCertificate(d, normalization, outer, sq.r2, pts, sq)
    return cert, compose(sq.ball_map(d), normalization)


def sandwich_squeeze(poly: ConvexPolytope, d: Optional[int] = None) -> Tuple[SandwichCertificate, MapExpr]:
    """Squeeze a full-dimensional polytope onto the closed unit ball."""
    dim = poly.dimension if d is None else int(d)
    if dim != poly.dimension or poly.equalities or poly.intrinsic_dimension != dim:
        raise DegeneratePolytopeError("squeeze", message="polytope is not full-dimensional")
    center, radius = poly.chebyshev_center()
    if radius < MIN_INRADIUS:
        raise DegeneratePolytopeError("squeeze", message="inscribed radius vanishes", details={"radius": radius})
    a = B.affine(np.eye(dim) / radius, -center / radius)
    cert, map_ = squeeze_normalized(a, poly.vertices)
    logger.debug("sandwich squeeze", extra={"d": dim, "inradius": radius, "r2": cert.r2})
    return cert, map_


def interval_to_ball(a: float, b: float) -> MapExpr:
    """The affine map [a, b] -> [-1, 1]."""
    if not b > a:
        raise ValueError("interval needs a < b")
    return B.affine([[2.0 / (b - a)]], [-(a + b) / (b - a)])


def simplex_normalization(d: int) -> MapExpr:
    """x -> -1 + (sqrt(d) + d) x, sending the solid simplex onto
    {x_i >= -1, sum x_i <= sqrt(d)}, whose inscribed ball is the unit ball."""
    s = math.sqrt(d) + d
    return B.affine(s * np.eye(d), -np.ones(d))


def simplex_to_ball(d: int) -> MapExpr:
    """Delta_d onto the closed unit ball through the smallest admissible peak-rule R^2.

    The R^2 = 2 d^2 profile is radial_poly(2 * d * d).
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    if d == 1:
        return interval_to_ball(0.0, 1.0)
    _, map_ = squeeze_normalized(simplex_normalization(d), simplex_vertices(d))
    return map_


def cube_to_ball(d: int) -> MapExpr:
    return sandwich_squeeze(hypercube(d))[1]


def prism_to_ball(d: int) -> MapExpr:
    return sandwich_squeeze(prism(d))[1]


def cylinder_certificate(d: int) -> Tuple[SandwichCertificate, MapExpr]:
    """The cylinder already sits between B_d and B_d(0, sqrt 2)."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    corner = np.zeros((1, d))
    corner[0, 0] = 1.0
    if d > 1:
        corner[0, -1] = 1.0
    return squeeze_normalized(B.identity(d), corner)


def cylinder_to_ball(d: int) -> MapExpr:
    return cylinder_certificate(d)[1]


def model_to_ball(kind: str, d: int) -> MapExpr:
    builders = {
        "simplex_solid": simplex_to_ball,
        "hypercube": cube_to_ball,
        "prism": prism_to_ball,
        "cylinder": cylinder_to_ball,
    }
    if kind not in builders:
        raise ValueError(f"no squeeze onto the ball for {kind!r}")
    return builders[kind](d)
