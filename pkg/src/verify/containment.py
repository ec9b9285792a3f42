from __future__ import annotations

import logging
import time
from typing import Any, Callable, Optional, Union

import numpy as np

from ..models import sample
from ..polycore import MapExpr
from .parallel import chunked_map
from .report import VerificationReport, witness_of

logger = logging.getLogger("nash_squeeze.verify")

MapLike = Union[MapExpr, Callable[[np.ndarray], np.ndarray]]


def check_containment(
    map_: MapLike,
    domain: Any,
    target: Any,
    n: int = 10_000,
    seed: int = 0,
    tol: float = 1e-9,
    *,
    mode: str = "interior",
    points: Optional[np.ndarray] = None,
    threads: Optional[int] = None,
) -> VerificationReport:
    """Sample the domain, map, and measure how far images fall outside the target."""
    started = time.perf_counter()
    x = sample(domain, n, seed, mode) if points is None else np.atleast_2d(np.asarray(points, dtype=float))
    y = chunked_map(map_, x, threads)
    if y.shape[1] != target.dimension:
        raise ValueError(f"map lands in R^{y.shape[1]}, target lives in R^{target.dimension}")
    viol = target.violation(y)
    worst = int(np.argmax(viol))
    report = VerificationReport(
        check="containment",
        n_samples=int(x.shape[0]),
        seed=seed,
        tolerances={"tol": tol},
        worst_violation=float(viol[worst]),
        witness=witness_of(x, worst, image=y),
        details={"n_outside": int(np.count_nonzero(viol > tol)), "mode": mode},
    )
    report.finish(report.worst_violation <= tol, started)
    logger.info(
        "containment checked",
        extra={"passed": report.passed, "worst": report.worst_violation, "n": report.n_samples},
    )
    return report
