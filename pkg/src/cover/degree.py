"""Boundary degree of the planar cover map.

The boundary of Delta_1 x [0, 1] is a topological circle; F sends it to the
loop v_1 -> v_2 -> p -> v_1 (bottom edge, alpha_2, the collapsed top edge,
alpha_1 backwards). After the radial retraction onto the boundary of
sigma-hat the loop winds once around any interior center.
"""

from __future__ import annotations

import logging
import time
from typing import Any, Optional, Sequence

import numpy as np

from ..errors import DimensionMismatchError
from ..verify import VerificationReport, winding_number
from .instance import ApexInstance
from .retraction import radial_retraction

logger = logging.getLogger("nash_squeeze.cover")

BOUNDARY_SAMPLES = 10_000


def _instance_of(cover: Any) -> ApexInstance:
    inst = getattr(cover, "instance", None)
    if inst is None:
        inst = cover.cover.instance
    return inst


def boundary_loop(cover: Any, samples: int = BOUNDARY_SAMPLES) -> np.ndarray:
    """F on the boundary of the (s, t) unit square, counter-clockwise, lambda = (1 - s, s)."""
    per_edge = max(2, -(-samples // 4))
    u = np.linspace(0.0, 1.0, per_edge, endpoint=False)
    s = np.concatenate([u, np.ones(per_edge), 1.0 - u, np.zeros(per_edge)])
    t = np.concatenate([np.zeros(per_edge), u, np.ones(per_edge), 1.0 - u])
    return np.asarray(cover(np.column_stack([1.0 - s, s, t])))


def orientation(instance: ApexInstance) -> int:
    """+1 when v_1, v_2, p run counter-clockwise."""
    v1, v2 = instance.vertices
    a, b = v2 - v1, instance.apex - v1
    return 1 if a[0] * b[1] - a[1] * b[0] > 0 else -1


def boundary_degree(
    cover: Any,
    center: Optional[Sequence[float]] = None,
    samples: int = BOUNDARY_SAMPLES,
) -> int:
    """Winding number of rho o F on the boundary circle around `center`, sign-normalized.

    `cover` is a CoverMap or a perturbed cover; the center defaults to the
    centroid of sigma-hat. The sign comes from the instance (v_1, v_2, p), never
    from the map, so a cover that reverses the boundary reports -1.
    """
    inst = _instance_of(cover)
    if inst.n != 2:
        raise DimensionMismatchError("cover", message="boundary degree is computed in the plane only", details={"n": inst.n})
    z = inst.sigma_hat.centroid if center is None else np.asarray(center, dtype=float)
    rho = radial_retraction(inst.simplex_forms, z)
    loop = rho(boundary_loop(cover, samples))
    deg = orientation(inst) * winding_number(loop, z)
    logger.debug("boundary degree", extra={"degree": deg, "samples": int(loop.shape[0])})
    return deg


def degree_report(cover: Any, center: Optional[Sequence[float]] = None, samples: int = BOUNDARY_SAMPLES) -> VerificationReport:
    started = time.perf_counter()
    deg = boundary_degree(cover, center, samples)
    rep = VerificationReport(
        check="boundary_degree",
        n_samples=samples,
        worst_violation=float(abs(deg - 1)),
        details={"degree": deg},
    )
    return rep.finish(deg == 1, started)
