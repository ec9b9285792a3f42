"""Deterministic samplers for models and polytopes (PCG64 via default_rng)."""

from __future__ import annotations

import logging
from typing import Any, Mapping

import numpy as np

from ..errors import ModuleError, RejectionBudgetError
from .polytope import ConvexPolytope
from .sets import SemialgebraicSet

logger = logging.getLogger("nash_squeeze.models")

MODES = ("interior", "boundary", "barycentric")
MIN_ACCEPTANCE = 1e-6
MIN_DRAWS_BEFORE_GIVING_UP = 1_000_000
ACCEPT_TOL = 1e-12


def sample(set_: Any, n: int, seed: int, mode: str = "interior") -> np.ndarray:
    """Draw `n` points of `set_`; returns shape (n, dimension)."""
    if mode not in MODES:
        raise ValueError(f"unknown sampling mode {mode!r}")
    rng = np.random.default_rng(seed)
    if isinstance(set_, ConvexPolytope):
        if mode == "barycentric":
            return _barycentric(set_.vertices, n, rng)
        if mode == "boundary":
            return _polytope_boundary(set_, n, rng)
        if set_.equalities:
            return _barycentric(set_.vertices, n, rng)
        return _rejection(set_, n, rng)
    if isinstance(set_, SemialgebraicSet):
        if set_.shape is not None:
            return _shaped(set_.shape, set_.dimension, n, rng, mode)
        if mode != "interior":
            raise ModuleError("models", code="unsupported_mode", message=f"{mode} sampling needs a polytope or tagged set")
        return _rejection(set_, n, rng)
    raise TypeError(f"cannot sample {type(set_).__name__}")


def _barycentric(vertices: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    weights = rng.dirichlet(np.ones(vertices.shape[0]), size=n)
    return weights @ vertices


def _polytope_boundary(poly: ConvexPolytope, n: int, rng: np.random.Generator) -> np.ndarray:
    faces = [poly.facet_vertices(i) for i in range(len(poly.facets))]
    faces = [f for f in faces if f.shape[0] > 0]
    which = rng.integers(0, len(faces), size=n)
    out = np.empty((n, poly.dimension))
    for k, face in enumerate(faces):
        idx = np.flatnonzero(which == k)
        if idx.size:
            out[idx] = _barycentric(face, idx.size, rng)
    return out


def _directions(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(n, d))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return g / norms


def _shaped(shape: Mapping[str, Any], d: int, n: int, rng: np.random.Generator, mode: str) -> np.ndarray:
    center = np.asarray(shape["center"], dtype=float)
    radius = float(shape["radius"])
    dirs = _directions(d, n, rng)
    if shape["kind"] == "sphere" or mode == "boundary":
        pts = center + radius * dirs
        if shape["kind"] == "sphere":
            # re-normalize so the defining residual stays at rounding level
            off = pts - center
            pts = center + radius * off / np.linalg.norm(off, axis=1, keepdims=True)
        return pts
    radii = radius * rng.uniform(0.0, 1.0, size=(n, 1)) ** (1.0 / d)
    return center + radii * dirs


def _rejection(set_: Any, n: int, rng: np.random.Generator) -> np.ndarray:
    if set_.bbox is None:
        raise ModuleError("models", code="no_bbox", message="rejection sampling needs a bounding box")
    lo = np.asarray(set_.bbox[0], dtype=float)
    hi = np.asarray(set_.bbox[1], dtype=float)
    accepted = []
    count = 0
    draws = 0
    batch = max(1024, 2 * n)
    while count < n:
        cand = rng.uniform(lo, hi, size=(batch, lo.size))
        draws += batch
        keep = cand[set_.contains(cand, ACCEPT_TOL)]
        accepted.append(keep)
        count += keep.shape[0]
        if draws >= MIN_DRAWS_BEFORE_GIVING_UP and count / draws < MIN_ACCEPTANCE:
            raise RejectionBudgetError(
                "models",
                message="rejection sampler acceptance rate below budget",
                details={"draws": draws, "accepted": count},
            )
    out = np.vstack(accepted)[:n]
    logger.debug("rejection sample", extra={"n": n, "draws": draws})
    return out
