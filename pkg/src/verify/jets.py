"""Agreement of t-jets of two maps on (simplex x interval) along lambda slices."""

from __future__ import annotations

import logging
from typing import Any, Optional

import numpy as np

from ..polycore import MapExpr
from ..polycore import builders as B
from ..polycore.mapexpr import jet_along

logger = logging.getLogger("nash_squeeze.verify")

JET_TOL = 1e-7
LAMBDA_SAMPLES = 100


def t_jet(map_: Any, lam: np.ndarray, t0: float, k: int) -> np.ndarray:
    """Derivatives 0..k in t at (lam, t0), shape (k + 1, codim)."""
    if hasattr(map_, "t_jet"):
        return np.asarray(map_.t_jet(lam, t0, k), dtype=float)
    if isinstance(map_, MapExpr):
        n = lam.size
        column = np.zeros((n + 1, 1))
        column[n, 0] = 1.0
        path = B.affine(column, np.append(lam, 0.0))
        return jet_along(map_, path, t0, k).values
    raise TypeError(f"cannot take jets of {type(map_).__name__}")


def jet_residual(
    f: Any,
    g: Any,
    t0: float,
    k: int,
    n: int = LAMBDA_SAMPLES,
    seed: int = 0,
    lam_dim: Optional[int] = None,
) -> float:
    """max over sampled lambda of the largest derivative difference up to order k."""
    if lam_dim is None:
        lam_dim = int(f.domain_dim) - 1
    rng = np.random.default_rng(seed)
    lams = rng.dirichlet(np.ones(lam_dim), size=n) if lam_dim > 1 else np.ones((n, 1))
    worst = 0.0
    for lam in lams:
        diff = t_jet(f, lam, t0, k) - t_jet(g, lam, t0, k)
        worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def jet_equal(
    f: Any,
    g: Any,
    t0: float,
    k: int,
    *,
    n: int = LAMBDA_SAMPLES,
    seed: int = 0,
    tol: float = JET_TOL,
    lam_dim: Optional[int] = None,
) -> bool:
    """True iff the t-jets of f and g at t0 agree up to order k on every sampled slice."""
    res = jet_residual(f, g, t0, k, n=n, seed=seed, lam_dim=lam_dim)
    logger.debug("jet residual", extra={"t0": t0, "order": k, "residual": res})
    return res < tol
