"""Inverse stereographic projection and the covers built from it."""

from __future__ import annotations

import math

import numpy as np

from ..models import ball_projection
from ..polycore import MapExpr, Polynomial
from ..polycore import builders as B
from ..polycore.mapexpr import compose


def stereographic_inverse(d: int) -> MapExpr:
    """R^d -> S^d, x -> (2x, |x|^2 - 1) / (1 + |x|^2)."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    x = B.identity(d)
    s = B.norm_sq(x)
    numer = B.stack(B.scale(2.0, x), B.shift(s, [-1.0]))
    return B.multiply(B.reciprocal(B.shift(s, [1.0])), numer)


def ball_double_cover(d: int) -> MapExpr:
    """First d coordinates of the inverse stereographic projection: R^d onto B_d."""
    return B.select(stereographic_inverse(d), range(d))


def complex_square() -> MapExpr:
    """(x, y) -> (x^2 - y^2, 2xy)."""
    re = Polynomial.from_terms(2, [((2, 0), 1.0), ((0, 2), -1.0)])
    im = Polynomial.from_terms(2, [((1, 1), 2.0)])
    return B.polynomial_map([re, im])


def circle_cover() -> MapExpr:
    """[-1, 1] onto S^1; t = +-1 go to (1, 0) and t = 0 to (-1, 0)."""
    return compose(complex_square(), stereographic_inverse(1))


def arc_cover(theta0: float, theta1: float) -> MapExpr:
    """[-1, 1] onto the arc of S^1 running counterclockwise from angle theta0 to theta1.

    The circle cover sends t to angle 4 atan(t) - pi, so restricting it to
    [-tan(L/8), tan(L/8)] sweeps an arc of length L centered at angle -pi;
    a rotation then moves that arc into place.
    """
    length = float(theta1) - float(theta0)
    if not 0.0 < length < 2.0 * math.pi:
        raise ValueError("a proper arc needs 0 < theta1 - theta0 < 2 pi")
    tau = math.tan(length / 8.0)
    turn = 0.5 * (theta0 + theta1) + math.pi
    c, s = math.cos(turn), math.sin(turn)
    rotation = B.affine(np.array([[c, -s], [s, c]]), [0.0, 0.0])
    window = B.affine([[tau]], [0.0])
    return compose(rotation, compose(circle_cover(), window))


def sphere_to_ball(d: int) -> MapExpr:
    """Projection R^{d+1} -> R^d; restricted to S^d its image is B_d."""
    return ball_projection(d)
