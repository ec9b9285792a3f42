"""Replace the piecewise apex paths by single polynomials with the same order-3 jets at 0 and 1."""

from __future__ import annotations

import logging
from typing import Callable

import numpy as np

from ..pathfit import JetSpec, approx_fit
from .instance import ApexInstance, OpenCell
from .paths import ApexPaths, retimed

logger = logging.getLogger("nash_squeeze.cover")

SMOOTH_ORDER = 3
SMOOTH_EPS = 0.05


def _path_margin(instance: ApexInstance, i: int) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """Exterior cell S_i on (0, 1), the open simplex sigma-hat on the flaps."""
    cell = instance.exterior_cell(i)
    flap = OpenCell(instance.simplex_forms)

    def margin(points: np.ndarray, t: np.ndarray) -> np.ndarray:
        inside = (t > 0.0) & (t < 1.0)
        return np.where(inside, cell.margin(points), flap.margin(points))

    return margin


def smooth_paths(paths: ApexPaths, eps: float = SMOOTH_EPS, order: int = SMOOTH_ORDER, **fit_options) -> ApexPaths:
    """Single-polynomial paths on [-delta/2, 1 + delta/2].

    Pass eps below the measured robustness radius to keep every cover
    conclusion; DegreeCapError from the fit propagates.
    """
    delta = 0.5 * paths.delta
    interval = (-delta, 1.0 + delta)
    inst = paths.instance
    fitted, fits = [], []
    for i in range(inst.n):
        spec = JetSpec(
            anchors=(0.0, 1.0),
            jets=(paths.jet(i, 0.0, order), paths.jet(i, 1.0, order)),
            order=order,
            interval=interval,
        )
        fit = approx_fit(paths.paths[i], spec, eps, _path_margin(inst, i), **fit_options)
        logger.info("apex path smoothed", extra={"path": i, "degree": fit.degree, "deviation": fit.max_deviation})
        fitted.append(fit.path)
        fits.append(fit)
    return retimed(paths, delta, fitted, fits)
