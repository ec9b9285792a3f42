"""Polynomial approximation of a path with prescribed jets, staying inside an open set.

Candidates are hermite + prod (t - t_i)^(m+1) c(t): the correction c is a
Chebyshev series fitted by least squares to the target on Chebyshev points,
and its degree grows until the sup deviation, the derivative deviations near
the anchors and the sampled membership margin all pass.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np
from numpy.polynomial import chebyshev as C

from ..errors import DegreeCapError, InvalidInstanceError, JetMismatchError, NotPolynomialAtAnchorError
from ..polycore import serialize
from .hermite import JET_TOL, hermite_fit, jet_residual
from .jets import JetSpec
from .path import FactoredPath, PiecewisePath, PolynomialPath

logger = logging.getLogger("nash_squeeze.pathfit")

MarginFn = Callable[[np.ndarray, np.ndarray], np.ndarray]

START_DEGREE = 4
DEGREE_STEP = 4
DEGREE_CAP = 200
FIT_POINTS = 2000
CHECK_SAMPLES = 10_000
SEEDS = (0, 1)
ANCHOR_GUARD = 1e-3
NEIGHBORHOOD_HALVINGS = 20


@dataclass(frozen=True, eq=False)
class FitResult:
    path: FactoredPath
    degree: int
    correction_degree: int
    max_deviation: float
    derivative_deviations: Tuple[float, ...]
    neighborhood: float
    min_margin: float
    jet_residual: float
    meta: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return {
            "path": self.path.to_json(),
            "map": serialize.to_json(self.path.to_mapexpr()),
            "degree": self.degree,
            "correction_degree": self.correction_degree,
            "max_deviation": self.max_deviation,
            "derivative_deviations": list(self.derivative_deviations),
            "neighborhood": self.neighborhood,
            "min_margin": self.min_margin,
            "jet_residual": self.jet_residual,
            "meta": dict(self.meta),
        }


def as_margin(oracle: Any) -> MarginFn:
    """Accept a set (open semantics: margin > 0 inside) or a margin(points, t) callable."""
    if hasattr(oracle, "margin"):
        return lambda x, t: oracle.margin(x)
    if callable(oracle):
        return oracle
    raise TypeError(f"cannot use {type(oracle).__name__} as a membership oracle")


def _evaluate(path: Any, t: np.ndarray) -> np.ndarray:
    if hasattr(path, "evaluate"):
        return np.asarray(path.evaluate(t))
    return np.asarray(path(t))


def _cheb_points(n: int, window: Tuple[float, float]) -> np.ndarray:
    a, b = window
    x = np.cos(np.pi * (np.arange(n) + 0.5) / n)
    return np.sort(0.5 * (a + b) + 0.5 * (b - a) * x)


def guarded_samples(window: Tuple[float, float], anchors: Sequence[float], n: int, seed: int, guard: float) -> np.ndarray:
    """Uniform times in the window, at least guard * length away from every anchor."""
    a, b = window
    rng = np.random.default_rng(seed)
    t = rng.uniform(a, b, size=n)
    keep = np.ones(n, dtype=bool)
    for s in anchors:
        keep &= np.abs(t - s) >= guard * (b - a)
    return t[keep]


def check_preconditions(target: Any, spec: JetSpec, margin: MarginFn, guard: float = ANCHOR_GUARD) -> None:
    for t0, want in zip(spec.anchors, spec.jets):
        if isinstance(target, PiecewisePath) and target.is_breakpoint(t0):
            raise NotPolynomialAtAnchorError(
                "pathfit", message="target is not polynomial near an anchor", details={"anchor": t0}
            )
        got = np.asarray(target.jet(t0, spec.order))
        gap = float(np.max(np.abs(got - want))) / max(1.0, float(np.max(np.abs(want))))
        if gap > JET_TOL:
            raise JetMismatchError("pathfit", message="target jets differ from the prescribed ones", details={"anchor": t0, "residual": gap})
    t = guarded_samples(spec.interval, spec.anchors, CHECK_SAMPLES, SEEDS[0], guard)
    m = margin(_evaluate(target, t), t)
    if np.min(m) <= 0:
        k = int(np.argmin(m))
        raise InvalidInstanceError(
            "pathfit", message="target leaves the open set", details={"t": float(t[k]), "margin": float(m[k])}
        )


def _derivative_deviation(target: Any, beta: FactoredPath, spec: JetSpec, eps: float) -> Tuple[List[float], float, bool]:
    """Shrink the anchor neighborhoods until every derivative gap of order 1..m is <= eps."""
    a, b = spec.interval
    gaps = np.diff(np.asarray(spec.anchors)) if len(spec.anchors) > 1 else np.array([b - a])
    radius = 0.1 * float(min(np.min(gaps), b - a))
    if isinstance(target, PiecewisePath):
        radius = min([radius] + [0.5 * target.polynomial_radius(t0) for t0 in spec.anchors])
    devs: List[float] = [0.0] * spec.order
    for _ in range(NEIGHBORHOOD_HALVINGS):
        devs = [0.0] * spec.order
        for t0 in spec.anchors:
            t = np.linspace(max(a, t0 - radius), min(b, t0 + radius), 201)
            piece = target.piece_at(t0) if isinstance(target, PiecewisePath) else target
            for k in range(1, spec.order + 1):
                diff = piece.derivative(k).evaluate(t) - beta.derivative(k).evaluate(t)
                devs[k - 1] = max(devs[k - 1], float(np.max(np.linalg.norm(diff, axis=1))))
        if all(d <= eps for d in devs):
            return devs, radius, True
        radius *= 0.5
    return devs, radius, False


def approx_fit(
    target: Any,
    spec: JetSpec,
    eps: float,
    oracle: Any,
    *,
    start_degree: int = START_DEGREE,
    degree_step: int = DEGREE_STEP,
    degree_cap: int = DEGREE_CAP,
    fit_points: int = FIT_POINTS,
    samples: int = CHECK_SAMPLES,
    seeds: Sequence[int] = SEEDS,
    guard: float = ANCHOR_GUARD,
) -> FitResult:
    """A polynomial beta with the prescribed jets, within eps of the target, inside the open set."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    margin = as_margin(oracle)
    check_preconditions(target, spec, margin, guard)
    base = hermite_fit(spec)
    n_cond = spec.n_conditions
    window = spec.interval

    s_fit = _cheb_points(fit_points, window)
    y_fit = _evaluate(target, s_fit)
    s_check = np.linspace(window[0], window[1], samples)
    y_check = _evaluate(target, s_check)
    t_member = [guarded_samples(window, spec.anchors, samples, seed, guard) for seed in seeds]

    deg_c = start_degree
    last: Dict[str, Any] = {}
    vanish_fit = FactoredPath(base, spec.anchors, spec.order, PolynomialPath.constant(np.zeros(spec.codim), window)).vanishing(s_fit)
    residual_fit = y_fit - base.evaluate(s_fit)
    while n_cond + deg_c <= degree_cap:
        design = vanish_fit[:, None] * C.chebvander(base.local(s_fit), deg_c)
        coef, *_ = np.linalg.lstsq(design, residual_fit, rcond=None)
        beta = FactoredPath(base, spec.anchors, spec.order, PolynomialPath(coef, window))
        degree = beta.degree

        jr = jet_residual(beta, spec)
        dev = float(np.max(np.linalg.norm(beta.evaluate(s_check) - y_check, axis=1)))
        ok = jr < JET_TOL and dev < eps
        devs: List[float] = []
        radius = 0.0
        if ok:
            devs, radius, ok = _derivative_deviation(target, beta, spec, eps)
        min_margin = float("nan")
        if ok:
            min_margin = min(float(np.min(margin(beta.evaluate(t), t))) for t in t_member)
            ok = min_margin > 0
        last = {"degree": degree, "deviation": dev, "jet_residual": jr, "min_margin": min_margin}
        logger.debug("fit attempt", extra=last)
        if ok:
            result = FitResult(
                path=beta,
                degree=degree,
                correction_degree=deg_c,
                max_deviation=dev,
                derivative_deviations=tuple(devs),
                neighborhood=radius,
                min_margin=min_margin,
                jet_residual=jr,
                meta={"eps": eps, "seeds": list(seeds), "samples": samples, "hermite_degree": base.degree},
            )
            logger.info("path fitted", extra={"degree": degree, "deviation": dev, "margin": min_margin})
            return result
        deg_c += degree_step
    raise DegreeCapError("pathfit", message="no admissible polynomial below the degree cap", details={"cap": degree_cap, **last})

