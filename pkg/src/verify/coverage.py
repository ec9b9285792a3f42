"""Sampled surjectivity: how close does the image come to every target point?

Each target starts from the nearest image of a domain net (KD-tree query) and
is then refined by a compass search that only moves to domain points (extreme
barrier) and halves its step whenever no direction improves.
"""

from __future__ import annotations

import logging
import math
import time
from typing import Any, Callable, Optional, Union

import numpy as np
from scipy.linalg import null_space
from scipy.spatial import cKDTree

from ..errors import ModuleError, PoleViolationError
from ..models import ConvexPolytope, sample
from ..polycore import MapExpr
from .parallel import chunked_map
from .report import VerificationReport, witness_of

logger = logging.getLogger("nash_squeeze.verify")

MapLike = Union[MapExpr, Callable[[np.ndarray], np.ndarray]]

DOMAIN_TOL = 1e-12
STEP_FRACTION = 0.05


def _domain_net(domain: Any, n: int, seed: int) -> np.ndarray:
    parts = [sample(domain, n, seed)]
    try:
        parts.append(sample(domain, max(n // 4, 1), seed + 7, mode="boundary"))
    except ModuleError:
        pass
    if isinstance(domain, ConvexPolytope):
        parts.append(domain.vertices)
    return np.vstack(parts)


def _directions(domain: Any) -> np.ndarray:
    n = domain.dimension
    basis = np.eye(n)
    if isinstance(domain, ConvexPolytope) and domain.equalities:
        basis = null_space(np.array([e.normal for e in domain.equalities])).T
    return np.vstack([basis, -basis])


def _initial_step(domain: Any) -> float:
    bbox = getattr(domain, "bbox", None)
    if bbox is None:
        return STEP_FRACTION
    extent = np.asarray(bbox[1], dtype=float) - np.asarray(bbox[0], dtype=float)
    return STEP_FRACTION * float(np.max(extent))


def _safe_eval(map_: MapLike, x: np.ndarray, threads: Optional[int]) -> np.ndarray:
    try:
        return chunked_map(map_, x, threads)
    except PoleViolationError:
        out = []
        for row in x:
            try:
                out.append(np.asarray(map_(row[None, :]))[0])
            except PoleViolationError:
                out.append(None)
        width = next((len(r) for r in out if r is not None), 1)
        return np.array([np.full(width, np.nan) if r is None else r for r in out])


def check_coverage(
    map_: MapLike,
    domain: Any,
    target: Any,
    n_targets: int = 1000,
    seed: int = 0,
    gap_tol: float = 1e-3,
    refine_steps: int = 30,
    *,
    n_domain: int = 20_000,
    targets: Optional[np.ndarray] = None,
    target_mode: str = "interior",
    threads: Optional[int] = None,
    initial_step: Optional[float] = None,
) -> VerificationReport:
    started = time.perf_counter()
    net = _domain_net(domain, n_domain, seed)
    images = chunked_map(map_, net, threads)
    if targets is None:
        y = sample(target, n_targets, seed + 1, target_mode)
    else:
        y = np.atleast_2d(np.asarray(targets, dtype=float))
    if images.shape[1] != y.shape[1]:
        raise ValueError("map codomain and target dimension differ")

    finite = np.all(np.isfinite(images), axis=1)
    tree = cKDTree(images[finite])
    best, idx = tree.query(y)
    x = net[finite][idx].copy()
    initial_gap = float(np.max(best))

    dirs = _directions(domain)
    m, nd = y.shape[0], dirs.shape[0]
    step = np.full(m, _initial_step(domain) if initial_step is None else float(initial_step))
    diverged = np.zeros(m, dtype=bool)
    for _ in range(refine_steps):
        cand = x[:, None, :] + step[:, None, None] * dirs[None, :, :]
        flat = cand.reshape(m * nd, -1)
        ok = domain.contains(flat, DOMAIN_TOL)
        vals = np.full(flat.shape[0], np.inf)
        if np.any(ok):
            img = _safe_eval(map_, flat[ok], threads)
            dist = np.linalg.norm(img - np.repeat(y, nd, axis=0)[ok], axis=1)
            bad = ~np.isfinite(dist)
            dist[bad] = np.inf
            vals[ok] = dist
            diverged |= np.any((~np.isfinite(vals) & ok).reshape(m, nd), axis=1)
        vals = vals.reshape(m, nd)
        j = np.argmin(vals, axis=1)
        v = vals[np.arange(m), j]
        improve = v < best
        x[improve] = cand[improve, j[improve]]
        best[improve] = v[improve]
        step[~improve] *= 0.5

    # a diverged search proves nothing about its target
    achieved = float(np.max(best[~diverged])) if np.any(~diverged) else math.inf
    best[diverged] = np.inf
    if np.any(diverged):
        logger.warning("coverage search diverged", extra={"targets": int(np.count_nonzero(diverged))})
    worst = int(np.argmax(best))
    gap = float(best[worst])
    report = VerificationReport(
        check="coverage",
        n_samples=int(y.shape[0]),
        seed=seed,
        tolerances={"gap_tol": gap_tol},
        worst_violation=gap,
        witness=witness_of(y, worst, preimage=x),
        coverage_gap=gap,
        details={
            "initial_gap": initial_gap,
            "n_domain": int(net.shape[0]),
            "refine_steps": refine_steps,
            "diverged": int(np.count_nonzero(diverged)),
            "achieved_gap": achieved,
        },
    )
    report.finish(gap < gap_tol, started)
    logger.info("coverage checked", extra={"passed": report.passed, "gap": gap, "targets": m})
    return report
