from __future__ import annotations

import logging
import time
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from ..polycore import MapExpr, Polynomial
from .report import VerificationReport

logger = logging.getLogger("nash_squeeze.verify")

SIGN_MARGIN = 1e-12
SAMPLES_PER_INTERVAL = 257

Interval = Tuple[float, float, int]


def eval_path(path: Any, t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if isinstance(path, MapExpr):
        return path(t[:, None])
    if hasattr(path, "evaluate"):
        return np.asarray(path.evaluate(t))
    return np.asarray(path(t))


def eval_form(form: Any, points: np.ndarray) -> np.ndarray:
    if isinstance(form, Polynomial):
        return form.evaluate(points)
    if isinstance(form, MapExpr):
        return form(points)[:, 0]
    return np.asarray(form(points), dtype=float).reshape(-1)


def open_grid(lo: float, hi: float, n: int, edge: float = 0.0) -> np.ndarray:
    """n points strictly inside (lo, hi), keeping `edge` * length away from both ends."""
    length = hi - lo
    if edge > 0.0:
        return np.linspace(lo + edge * length, hi - edge * length, n)
    return np.linspace(lo, hi, n + 2)[1:-1]


def sign_profile(
    path: Any,
    forms: Sequence[Any],
    expected: Sequence[Sequence[Interval]],
    *,
    margin: float = SIGN_MARGIN,
    samples: int = SAMPLES_PER_INTERVAL,
    edge: float = 0.0,
    check: str = "signs",
) -> VerificationReport:
    """Check that forms[j] composed with the path has sign s on every (lo, hi, s) of expected[j]."""
    if len(forms) != len(expected):
        raise ValueError("one list of sign intervals per form")
    started = time.perf_counter()
    worst = 0.0
    witness: Dict[str, Any] = {}
    per_form: List[Dict[str, Any]] = []
    total = 0
    for j, (form, intervals) in enumerate(zip(forms, expected)):
        lowest = np.inf
        for lo, hi, sign in intervals:
            t = open_grid(float(lo), float(hi), samples, edge)
            vals = int(np.sign(sign)) * eval_form(form, eval_path(path, t))
            total += t.size
            k = int(np.argmin(vals))
            lowest = min(lowest, float(vals[k]))
            viol = max(0.0, margin - float(vals[k]))
            if viol > worst:
                worst = viol
                witness = {"form": j, "t": float(t[k]), "signed_value": float(vals[k])}
        per_form.append({"form": j, "min_signed_value": lowest})
    report = VerificationReport(
        check=check,
        n_samples=total,
        tolerances={"margin": margin},
        worst_violation=worst,
        witness=witness or None,
        details={"forms": per_form},
    )
    report.finish(worst == 0.0, started)
    logger.debug("sign profile", extra={"check": check, "passed": report.passed})
    return report
