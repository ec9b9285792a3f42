"""Cover of the closed ball by a tangent disc: g = ball_double_cover o isometry o projection."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import DegenerateFrameError, DimensionMismatchError
from ..models import ball, sample
from ..polycore import MapExpr
from ..polycore import builders as B
from ..polycore.mapexpr import compose
from ..squeeze import ball_double_cover

GRAM_TOL = 1e-10


def _frame(frame: Sequence[Sequence[float]], m: int, d: int) -> np.ndarray:
    f = np.atleast_2d(np.asarray(frame, dtype=float))
    if f.shape != (d, m):
        raise DimensionMismatchError("unbounded", message=f"frame must hold {d} vectors of R^{m}", details={"shape": list(f.shape)})
    gram = float(np.max(np.abs(f @ f.T - np.eye(d))))
    if gram >= GRAM_TOL:
        raise DegenerateFrameError("unbounded", message="frame is not orthonormal", details={"gram_residual": gram})
    return f


def tangent_projection(p: Sequence[float], frame: Sequence[Sequence[float]]) -> MapExpr:
    """Orthogonal projection of R^m onto p + span(frame)."""
    c = np.asarray(p, dtype=float)
    f = _frame(frame, c.size, len(frame))
    proj = f.T @ f
    return B.affine(proj, (c - proj @ c).tolist())


def tangent_cover(m: int, d: int, p: Sequence[float], frame: Sequence[Sequence[float]], eps: float) -> MapExpr:
    """R^m -> R^d sending the eps-disc of p + span(frame) onto the closed unit ball."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    c = np.asarray(p, dtype=float)
    if c.size != m:
        raise DimensionMismatchError("unbounded", message=f"p must lie in R^{m}")
    f = _frame(frame, m, d)
    # frame coordinates of the projection, scaled so the eps-disc becomes the unit ball
    chart = B.affine(f / eps, (-(f @ c) / eps).tolist())
    return compose(ball_double_cover(d), chart)


def tangent_disc(p: Sequence[float], frame: Sequence[Sequence[float]], eps: float, n: int, seed: int) -> np.ndarray:
    """Samples of the closed eps-disc at p inside p + span(frame)."""
    c = np.asarray(p, dtype=float)
    f = _frame(frame, c.size, len(frame))
    y = sample(ball(f.shape[0]), n, seed)
    return c + eps * y @ f
