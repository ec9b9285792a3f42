"""Pointwise identities of the squeeze and stereographic maps, and set distances."""

from __future__ import annotations

import time
from typing import Any, Optional

import numpy as np
from scipy.spatial.distance import directed_hausdorff

from ..models import ball, sample, sphere
from ..polycore import MapExpr
from .report import VerificationReport, witness_of


def _report(check: str, residual: np.ndarray, x: np.ndarray, tol: float, seed: Optional[int], started: float) -> VerificationReport:
    k = int(np.argmax(residual))
    rep = VerificationReport(
        check=check,
        n_samples=int(x.shape[0]),
        seed=seed,
        tolerances={"tol": tol},
        worst_violation=float(residual[k]),
        witness=witness_of(x, k),
    )
    return rep.finish(rep.worst_violation <= tol, started)


def check_sphere_fixity(
    map_: Any,
    d: int,
    normalization: Optional[MapExpr] = None,
    n: int = 1000,
    seed: int = 0,
    tol: float = 1e-10,
) -> VerificationReport:
    """map(x) == A(x) whenever |A(x)| = 1 (A = identity when no normalization is given)."""
    started = time.perf_counter()
    u = sample(sphere(d - 1), n, seed) if d > 1 else np.array([[-1.0], [1.0]])
    if normalization is None:
        x = u
    else:
        a = np.asarray(normalization.data["matrix"], dtype=float)
        b = np.asarray(normalization.data["offset"], dtype=float)
        x = np.linalg.solve(a, (u - b).T).T
    residual = np.max(np.abs(map_(x) - u), axis=1)
    return _report("sphere_fixity", residual, x, tol, seed, started)


def check_radiality(map_: Any, d: int, radius: float, n: int = 1000, seed: int = 0, tol: float = 1e-10) -> VerificationReport:
    """map(x) is a non-negative multiple of x on the ball of the given radius."""
    started = time.perf_counter()
    x = sample(ball(d, radius), n, seed)
    y = map_(x)
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    unit = np.divide(x, norms, out=np.zeros_like(x), where=norms > 0)
    along = np.sum(y * unit, axis=1, keepdims=True)
    residual = np.linalg.norm(y - along * unit, axis=1) + np.maximum(0.0, -along[:, 0])
    return _report("radiality", residual, x, tol, seed, started)


def check_unit_norm(map_: Any, points: np.ndarray, tol: float = 1e-12, seed: Optional[int] = None) -> VerificationReport:
    started = time.perf_counter()
    x = np.atleast_2d(np.asarray(points, dtype=float))
    y = map_(x)
    residual = np.abs(np.sum(y * y, axis=1) - 1.0)
    return _report("unit_norm", residual, x, tol, seed, started)


def hausdorff_sampled(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two finite point clouds."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    return max(directed_hausdorff(a, b)[0], directed_hausdorff(b, a)[0])
