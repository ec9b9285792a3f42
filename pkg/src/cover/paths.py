"""Apex paths alpha_i from each base vertex v_i to the apex p.

alpha_i = v_i + t^2 u_i + t^3 w on [-delta, delta], a straight segment on
[delta, 1 - delta] and p - (t - 1)^3 w on [1 - delta, 1 + delta], with
u_i = p - v_i and w the solution of h_j(w) - h_j(0) = -1 for every j.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from ..errors import InfeasibleWError, NoDeltaError
from ..pathfit import PiecewisePath, PolynomialPath
from ..verify import VerificationReport, eval_path, open_grid
from .instance import INSTANCE_TOL, ApexInstance

logger = logging.getLogger("nash_squeeze.cover")

MAX_DELTA = 0.25
MIN_DELTA = 1e-6
SAMPLES_PER_PIECE = 1000
W_COND_LIMIT = 1e12
SIGN_EDGE = 0.01


@dataclass(frozen=True, eq=False)
class ApexPaths:
    instance: ApexInstance
    delta: float
    u: np.ndarray  # (n, n), row i = u_i
    w: np.ndarray
    paths: Tuple[Any, ...]  # PiecewisePath, or fitted polynomials after smoothing
    fits: Tuple[Any, ...] = field(default=())

    @property
    def window(self) -> Tuple[float, float]:
        return -self.delta, 1.0 + self.delta

    def evaluate(self, i: int, t: np.ndarray) -> np.ndarray:
        return np.asarray(self.paths[i].evaluate(t))

    def jet(self, i: int, t0: float, m: int) -> np.ndarray:
        return np.asarray(self.paths[i].jet(t0, m))

    def to_json(self) -> Dict[str, Any]:
        return {
            "delta": self.delta,
            "u": self.u.tolist(),
            "w": self.w.tolist(),
            "paths": [p.to_json() for p in self.paths],
            "constants": path_constants(self.instance, self.u, self.w),
        }


def solve_w(instance: ApexInstance) -> np.ndarray:
    normals = np.array([h.normal for h in instance.facet_forms])
    try:
        cond = float(np.linalg.cond(normals))
        if not np.isfinite(cond) or cond > W_COND_LIMIT:
            raise np.linalg.LinAlgError(f"condition number {cond:.3e}")
        w = np.linalg.solve(normals, -np.ones(instance.n))
    except np.linalg.LinAlgError as exc:
        raise InfeasibleWError("cover", message=f"facet forms are dependent: {exc}")
    return w


def apex_pieces(instance: ApexInstance, u: np.ndarray, w: np.ndarray, delta: float) -> Tuple[PiecewisePath, ...]:
    p = instance.apex
    out = []
    for i in range(instance.n):
        v = instance.vertices[i]
        near0 = PolynomialPath.from_power([v, np.zeros_like(v), u[i], w], (-delta, delta))
        near1 = PolynomialPath.from_power([p + w, -3.0 * w, 3.0 * w, -w], (1.0 - delta, 1.0 + delta))
        start = near0.evaluate(np.array([delta]))[0]
        end = near1.evaluate(np.array([1.0 - delta]))[0]
        middle = PolynomialPath.segment(start, end, (delta, 1.0 - delta))
        out.append(PiecewisePath((near0, middle, near1)))
    return tuple(out)


def path_constants(instance: ApexInstance, u: np.ndarray, w: np.ndarray) -> Dict[str, Any]:
    """Leading coefficients of h_j, h_0 and g_k along the paths near 0 and 1.

    eps0 = min(a_j, b_i0, c*_ik, e_ik) / 2 is the part of the robustness
    estimate computable from the instance alone.
    """
    a = np.array([-h.direction(w) for h in instance.facet_forms])
    b0 = instance.base_form.direction(u)
    g_at_v = np.array([[float(g(instance.vertices[i])) for g in instance.forms] for i in range(instance.n)])
    c = np.where(np.abs(g_at_v) <= INSTANCE_TOL, 0.0, g_at_v)
    d = np.array([[g.direction(u[i]) for g in instance.forms] for i in range(instance.n)])
    e = np.tile([float(g(instance.apex)) for g in instance.forms], (instance.n, 1))
    c_star = np.where(c > 0, c, d)
    h_at_v = np.array([float(h(instance.vertices[i])) for i, h in enumerate(instance.facet_forms)])
    h_dir_u = np.array([h.direction(u[i]) for i, h in enumerate(instance.facet_forms)])
    cross = max(
        (abs(float(h.direction(u[i]))) for j, h in enumerate(instance.facet_forms) for i in range(instance.n) if i != j),
        default=0.0,
    )
    eps0 = 0.5 * float(min(a.min(), b0.min(), c_star.min(), e.min()))
    return {
        "a": a.tolist(),
        "b0": b0.tolist(),
        "c": c.tolist(),
        "d": d.tolist(),
        "e": e.tolist(),
        "c_star": c_star.tolist(),
        "h_at_v": h_at_v.tolist(),
        "h_dir_u": h_dir_u.tolist(),
        "cross_residual": cross,
        "eps0": eps0,
        "signs_ok": bool(
            np.all(a > 0)
            and np.all(b0 > 0)
            and np.all(c_star > 0)
            and np.all(e > 0)
            and np.all(h_at_v > 0)
            and np.all(h_dir_u < 0)
            and cross <= INSTANCE_TOL
        ),
    }


def _sign_intervals(instance: ApexInstance, i: int, delta: float) -> Tuple[List[Any], List[List[Tuple[float, float, int]]]]:
    flaps = [(-delta, 0.0, 1), (1.0, 1.0 + delta, 1)]
    inner = [(0.0, delta, 1), (delta, 1.0 - delta, 1), (1.0 - delta, 1.0, 1)]
    forms: List[Any] = [instance.base_form]
    expected: List[List[Tuple[float, float, int]]] = [flaps]
    for j, h in enumerate(instance.facet_forms):
        forms.append(h)
        expected.append(flaps if j == i else flaps + [(lo, hi, -1) for lo, hi, _ in inner])
    for g in instance.forms:
        forms.append(g)
        expected.append(inner)
    return forms, expected


def _snap(x: float) -> float:
    return 0.0 if abs(x) <= INSTANCE_TOL else float(x)


def _arc_values(form: Any, instance: ApexInstance, u: np.ndarray, w: np.ndarray, i: int, t: np.ndarray) -> np.ndarray:
    """form along the cubic arc through the anchor nearest to t, from its exact coefficients."""
    if float(np.mean(t)) < 0.5:
        coef = [_snap(float(form(instance.vertices[i]))), 0.0, _snap(float(form.direction(u[i]))), float(form.direction(w))]
        return P.polyval(t, coef)
    coef = [_snap(float(form(instance.apex))), 0.0, 0.0, -float(form.direction(w))]
    return P.polyval(t - 1.0, coef)


def sign_conditions(paths: ApexPaths, samples: int = SAMPLES_PER_PIECE, edge: float = SIGN_EDGE) -> VerificationReport:
    """Flap and exterior-cell sign conditions for every path, plus the coefficient signs.

    Freshly built paths are checked on their cubic arcs through the exact
    composed coefficients (the values there are O(t^3) and drown in rounding
    otherwise); fitted paths are sampled, keeping `edge` * length off the
    interval ends.
    """
    started = time.perf_counter()
    inst = paths.instance
    closed_form = not paths.fits
    d = paths.delta
    worst = 0.0
    witness: Optional[Dict[str, Any]] = None
    total = 0
    per_path = []
    for i, path in enumerate(paths.paths):
        lowest = np.inf
        forms, expected = _sign_intervals(inst, i, d)
        for j, (form, intervals) in enumerate(zip(forms, expected)):
            for lo, hi, sign in intervals:
                on_arc = hi <= d or lo >= 1.0 - d
                t = open_grid(lo, hi, samples, 0.0 if closed_form else edge)
                if closed_form and on_arc:
                    vals = _arc_values(form, inst, paths.u, paths.w, i, t)
                else:
                    vals = form(eval_path(path, t))
                signed = sign * vals
                total += t.size
                k = int(np.argmin(signed))
                lowest = min(lowest, float(signed[k]))
                if signed[k] <= 0.0 and -float(signed[k]) >= worst:
                    worst = -float(signed[k])
                    witness = {"path": i, "form": j, "t": float(t[k]), "signed_value": float(signed[k])}
        per_path.append(bool(lowest > 0.0))
    constants = path_constants(inst, paths.u, paths.w)
    out = VerificationReport(
        check="apex_signs",
        n_samples=total,
        tolerances={"edge": 0.0 if closed_form else edge},
        worst_violation=worst,
        witness=witness,
        details={"paths": per_path, "eps0": constants["eps0"], "coefficients_ok": constants["signs_ok"]},
    )
    out.finish(all(per_path) and constants["signs_ok"], started)
    return out


def _admissible(instance: ApexInstance, u: np.ndarray, w: np.ndarray, delta: float, samples: int) -> bool:
    trial = ApexPaths(instance, delta, u, w, apex_pieces(instance, u, w, delta))
    return sign_conditions(trial, samples).passed


def build_apex_paths(instance: ApexInstance, samples: int = SAMPLES_PER_PIECE, tol: float = MIN_DELTA) -> ApexPaths:
    """Paths with the largest sampled-admissible delta <= 1/4, halved for margin."""
    u = instance.apex[None, :] - instance.vertices
    w = solve_w(instance)
    if _admissible(instance, u, w, MAX_DELTA, samples):
        found = MAX_DELTA
    else:
        if not _admissible(instance, u, w, MIN_DELTA, samples):
            raise NoDeltaError("cover", message="sign conditions fail even for the smallest delta", details={"delta": MIN_DELTA})
        lo, hi = MIN_DELTA, MAX_DELTA
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if _admissible(instance, u, w, mid, samples):
                lo = mid
            else:
                hi = mid
        found = lo
    delta = 0.5 * found
    paths = ApexPaths(instance, delta, u, w, apex_pieces(instance, u, w, delta))
    logger.info("apex paths built", extra={"delta": delta, "n": instance.n})
    return paths


def retimed(paths: ApexPaths, delta: float, new_paths: Sequence[Any], fits: Sequence[Any] = ()) -> ApexPaths:
    return ApexPaths(paths.instance, delta, paths.u, paths.w, tuple(new_paths), tuple(fits))
