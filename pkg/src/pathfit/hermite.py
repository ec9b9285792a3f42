"""Confluent (osculatory) interpolation in the Chebyshev basis."""

from __future__ import annotations

import logging
from typing import Sequence, Tuple

import numpy as np
from numpy.polynomial import chebyshev as C

from ..errors import IllConditionedError
from .jets import JetSpec
from .path import PolynomialPath

logger = logging.getLogger("nash_squeeze.pathfit")

SOLVE_TOL = 1e-6
JET_TOL = 1e-8


def confluent_matrix(anchors: Sequence[float], order: int, degree: int, window: Tuple[float, float]) -> np.ndarray:
    """Rows: k-th derivative (k <= order) at each anchor of T_0..T_degree on `window`."""
    a, b = window
    n = degree + 1
    x = (2.0 * np.asarray(anchors, dtype=float) - a - b) / (b - a)
    rows = np.zeros((len(anchors), order + 1, n))
    eye = np.eye(n)
    for k in range(order + 1):
        if k >= n:
            break
        dk = C.chebder(eye, k, scl=2.0 / (b - a), axis=0) if k else eye
        rows[:, k, :] = C.chebvander(x, dk.shape[0] - 1) @ dk
    return rows.reshape(len(anchors) * (order + 1), n)


def _scale(rhs: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(rhs))))


def jet_residual(path: PolynomialPath, spec: JetSpec) -> float:
    """Largest relative gap between the path's jets and the prescribed ones."""
    rhs = spec.rhs()
    got = np.vstack([path.jet(t, spec.order) for t in spec.anchors])
    return float(np.max(np.abs(got - rhs))) / _scale(rhs)


def hermite_fit(spec: JetSpec) -> PolynomialPath:
    """The unique polynomial of degree < #conditions matching every jet."""
    degree = spec.n_conditions - 1
    mat = confluent_matrix(spec.anchors, spec.order, degree, spec.interval)
    rhs = spec.rhs()
    try:
        coef = np.linalg.solve(mat, rhs)
    except np.linalg.LinAlgError as exc:
        raise IllConditionedError("pathfit", message=f"confluent system is singular: {exc}")
    resid = float(np.max(np.abs(mat @ coef - rhs))) / _scale(rhs)
    if not np.all(np.isfinite(coef)) or resid > SOLVE_TOL:
        raise IllConditionedError(
            "pathfit",
            message="confluent solve residual too large; anchors may be too close",
            details={"residual": resid, "anchors": list(spec.anchors)},
        )
    path = PolynomialPath(coef, spec.interval)
    jr = jet_residual(path, spec)
    if jr > JET_TOL:
        logger.warning("hermite jets drift", extra={"jet_residual": jr, "degree": degree})
    return path
