"""Polynomial separating a compact set from a disjoint closed set, on samples.

After moving S1 into B(0, 1/2), f0 is a least-squares polynomial fit of the
surrogate dist(x, S1) - dist(x, S2) on the unit ball. Adding c' |x|^(2k)
with c' above the coefficient mass of f0 and 2k > deg f0 makes f positive
off the unit ball, and k large keeps the added term below |f0| on S1.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np
from scipy.spatial import cKDTree

from ..errors import SeparationError
from ..models import ball, sample
from ..polycore import MapExpr, Polynomial
from ..polycore import builders as B
from ..polycore.mapexpr import compose

logger = logging.getLogger("nash_squeeze.unbounded")

START_DEGREE = 2
DEGREE_STEP = 2
DEGREE_CAP = 12
FIT_SAMPLES = 4000
INNER_RADIUS = 0.5


@dataclass(frozen=True, eq=False)
class SeparationCertificate:
    """f = f0 + c' |y|^(2k) in normalized coordinates y = scale (x - center)."""

    normalized: Polynomial
    f0: Polynomial
    c_prime: float
    k: int
    center: np.ndarray
    scale: float
    s1_margin: float  # max f over S1 samples, negative
    s2_margin: float  # min f over S2 samples, positive
    meta: Dict[str, Any] = field(default_factory=dict)

    @property
    def map(self) -> MapExpr:
        n = self.center.size
        chart = B.affine(self.scale * np.eye(n), (-self.scale * self.center).tolist())
        return compose(B.polynomial_map([self.normalized]), chart)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.map(np.atleast_2d(np.asarray(points, dtype=float)))[:, 0]

    def poly(self) -> Polynomial:
        """f in the original coordinates, expanded."""
        n = self.center.size
        comps = [
            Polynomial.from_terms(n, [(tuple(int(i == j) for i in range(n)), self.scale), ((0,) * n, -self.scale * self.center[j])])
            for j in range(n)
        ]
        return self.normalized.substitute(comps)

    def to_json(self) -> Dict[str, Any]:
        return {
            "normalized": self.normalized.to_json(),
            "c_prime": self.c_prime,
            "k": self.k,
            "center": self.center.tolist(),
            "scale": self.scale,
            "s1_margin": self.s1_margin,
            "s2_margin": self.s2_margin,
            "meta": dict(self.meta),
        }


def _points(set_or_points: Any, n: int, seed: int) -> np.ndarray:
    if isinstance(set_or_points, (np.ndarray, list, tuple)):
        return np.atleast_2d(np.asarray(set_or_points, dtype=float))
    return sample(set_or_points, n, seed)


def _exponents(n: int, degree: int) -> List[Tuple[int, ...]]:
    return [e for e in itertools.product(range(degree + 1), repeat=n) if sum(e) <= degree]


def _fit_f0(x: np.ndarray, y: np.ndarray, degree: int) -> Polynomial:
    exps = _exponents(x.shape[1], degree)
    design = np.column_stack([np.prod(x ** np.array(e), axis=1) for e in exps])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return Polynomial.from_terms(x.shape[1], zip(exps, coef.tolist()))


def _norm_power(n: int, k: int) -> Polynomial:
    sq = Polynomial.zero(n)
    for j in range(n):
        v = Polynomial.variable(n, j)
        sq = sq + v * v
    return sq.power(k)


def separation_poly(
    s1: Any,
    s2: Any,
    *,
    n_samples: int = 10_000,
    seed: int = 0,
    degree_cap: int = DEGREE_CAP,
) -> SeparationCertificate:
    """f < 0 on every S1 sample and f > 0 on every S2 sample.

    S1 and S2 are point arrays or samplable sets; raises SeparationError when
    no degree up to the cap certifies the signs.
    """
    a = _points(s1, n_samples, seed)
    b = _points(s2, n_samples, seed + 1)
    if a.shape[1] != b.shape[1]:
        raise ValueError("S1 and S2 live in different dimensions")
    n = a.shape[1]
    gap = float(np.min(cKDTree(b).query(a)[0]))
    if gap <= 0:
        raise SeparationError("unbounded", message="sampled S1 and S2 meet", details={"distance": gap})

    center = 0.5 * (a.min(axis=0) + a.max(axis=0))
    reach = float(np.max(np.linalg.norm(a - center, axis=1)))
    scale = INNER_RADIUS / reach if reach > 0 else 1.0
    ya, yb = scale * (a - center), scale * (b - center)

    fit_x = np.vstack([ya, yb[np.linalg.norm(yb, axis=1) <= 1.0], sample(ball(n), FIT_SAMPLES, seed + 2)])
    surrogate = cKDTree(ya).query(fit_x)[0] - cKDTree(yb).query(fit_x)[0]

    last: Dict[str, Any] = {}
    for degree in range(START_DEGREE, degree_cap + 1, DEGREE_STEP):
        f0 = _fit_f0(fit_x, surrogate, degree)
        worst_a = float(np.max(f0.evaluate(ya)))
        inner = np.linalg.norm(yb, axis=1) < 1.0
        worst_b = float(np.min(f0.evaluate(yb[inner]))) if np.any(inner) else math.inf
        last = {"degree": degree, "f0_on_s1": worst_a, "f0_on_s2": worst_b}
        if worst_a >= 0 or worst_b <= 0:
            logger.debug("separation attempt", extra=last)
            continue
        mass = sum(abs(c) for _, c in f0.terms)
        c_prime = 2.0 * mass
        k = max(degree // 2 + 1, math.ceil(math.log(c_prime / -worst_a, 4.0)) + 1)
        f = f0 + _norm_power(n, k).scale(c_prime)
        va, vb = f.evaluate(ya), f.evaluate(yb)
        s1_margin, s2_margin = float(np.max(va)), float(np.min(vb))
        last.update(k=k, c_prime=c_prime, s1_margin=s1_margin, s2_margin=s2_margin)
        if s1_margin < 0 < s2_margin:
            logger.info("separating polynomial", extra=last)
            return SeparationCertificate(
                normalized=f,
                f0=f0,
                c_prime=c_prime,
                k=k,
                center=center,
                scale=scale,
                s1_margin=s1_margin,
                s2_margin=s2_margin,
                meta={"degree": degree, "n_s1": int(a.shape[0]), "n_s2": int(b.shape[0]), "sample_gap": gap, "seed": seed},
            )
        logger.debug("separation attempt", extra=last)
    raise SeparationError("unbounded", message="no separating polynomial within the degree cap", details={"cap": degree_cap, **last})
