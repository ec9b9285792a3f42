"""Winding numbers of sampled closed planar loops by angle accumulation."""

from __future__ import annotations

from typing import Sequence, Union

import numpy as np

from ..errors import CenterHitError, StepTooLargeError

CENTER_TOL = 1e-9
MAX_STEP = np.pi / 2
ROUNDING_TOL = 0.01


def accumulated_angle(loop: np.ndarray, center: Union[Sequence[float], np.ndarray]) -> float:
    pts = np.asarray(loop, dtype=float) - np.asarray(center, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("loop samples must have shape (N, 2)")
    r = np.hypot(pts[:, 0], pts[:, 1])
    if np.any(r <= CENTER_TOL):
        k = int(np.argmin(r))
        raise CenterHitError("verify", message="loop passes through the center", details={"index": k, "distance": float(r[k])})
    theta = np.arctan2(pts[:, 1], pts[:, 0])
    steps = np.diff(np.append(theta, theta[0]))
    steps = (steps + np.pi) % (2 * np.pi) - np.pi
    if np.any(np.abs(steps) >= MAX_STEP):
        k = int(np.argmax(np.abs(steps)))
        raise StepTooLargeError(
            "verify",
            message="angular step too large; sample the loop more finely",
            details={"index": k, "step": float(steps[k])},
        )
    return float(np.sum(steps))


def winding_number(loop: np.ndarray, center: Union[Sequence[float], np.ndarray]) -> int:
    """Degree of the closed loop (samples in order, closing edge implied) around `center`."""
    turns = accumulated_angle(loop, center) / (2 * np.pi)
    w = int(np.rint(turns))
    if abs(turns - w) >= ROUNDING_TOL:
        raise StepTooLargeError("verify", message="accumulated angle is not close to a whole turn", details={"turns": turns})
    return w
