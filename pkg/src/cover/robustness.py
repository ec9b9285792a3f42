"""Measured robustness radius of a cover map under jet-preserving perturbations.

A perturbation direction is q(lambda, t) = (t (t - 1))^4 sum_i lambda_i c_i(t)
with random Chebyshev c_i, normalized to unit sup norm on the path window, so
G = F + m q keeps every t-jet of order <= 3 at t = 0 and t = 1. The radius
is the largest magnitude m on a doubling then bisection schedule for which
every sampled direction keeps all four cover conclusions.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from ..errors import RobustnessError
from ..models import sample
from ..pathfit import FactoredPath, PolynomialPath
from ..verify import VerificationReport, check_coverage, open_grid
from ..verify.report import witness_of
from .covermap import CoverMap
from .instance import ApexInstance
from .paths import path_constants

logger = logging.getLogger("nash_squeeze.cover")

ANCHORS = (0.0, 1.0)
FLAT_ORDER = 3
DIRECTIONS = 20
DIRECTION_DEGREE = 3
START_MAGNITUDE = 1e-3
MAX_MAGNITUDE = 10.0
BISECTIONS = 6
EXCLUSION_TOL = 1e-9
FLAP_TOL = 1e-9
GAP_TOL = 1e-3

MapFn = Callable[[np.ndarray], np.ndarray]


def _flat_factor(t: np.ndarray) -> np.ndarray:
    return (t * (t - 1.0)) ** (FLAT_ORDER + 1)


@dataclass(frozen=True, eq=False)
class Perturbation:
    """Correction series c_i (one per base vertex), each flat to order 3 at both anchors."""

    corrections: Tuple[PolynomialPath, ...]

    def path(self, lam: np.ndarray) -> FactoredPath:
        coef = sum(float(l) * c.coef for l, c in zip(lam, self.corrections))
        window = self.corrections[0].window
        zero = PolynomialPath.constant(np.zeros(coef.shape[1]), window)
        return FactoredPath(zero, ANCHORS, FLAT_ORDER, PolynomialPath(coef, window))

    def evaluate(self, lam: np.ndarray, t: np.ndarray) -> np.ndarray:
        vanish = _flat_factor(t)
        out = np.zeros((t.size, self.corrections[0].codim))
        for i, c in enumerate(self.corrections):
            out += lam[:, [i]] * c.evaluate(t)
        return vanish[:, None] * out

    def sup_norm(self, samples: int = 2001) -> float:
        t = np.linspace(*self.corrections[0].window, samples)
        vanish = np.abs(_flat_factor(t))
        return float(max(np.max(vanish * np.linalg.norm(c.evaluate(t), axis=1)) for c in self.corrections))


def random_directions(cover: CoverMap, count: int = DIRECTIONS, seed: int = 0, degree: int = DIRECTION_DEGREE) -> List[Perturbation]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        raw = Perturbation(tuple(PolynomialPath(rng.normal(size=(degree + 1, cover.n)), cover.window) for _ in range(cover.n)))
        scale = raw.sup_norm()
        out.append(Perturbation(tuple(PolynomialPath(c.coef / scale, c.window) for c in raw.corrections)))
    return out


@dataclass(frozen=True, eq=False)
class PerturbedCover:
    """G = F + magnitude * direction."""

    cover: CoverMap
    direction: Perturbation
    magnitude: float

    @property
    def domain_dim(self) -> int:
        return self.cover.domain_dim

    def __call__(self, points: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(points, dtype=float))
        n = self.cover.n
        return self.cover(x) + self.magnitude * self.direction.evaluate(x[:, :n], x[:, n])

    def t_jet(self, lam: np.ndarray, t0: float, k: int) -> np.ndarray:
        lam = np.asarray(lam, dtype=float).reshape(-1)
        return self.cover.t_jet(lam, t0, k) + self.magnitude * self.direction.path(lam).jet(t0, k)


def perturbed_cover(cover: CoverMap, direction: Perturbation, magnitude: float) -> PerturbedCover:
    return PerturbedCover(cover, direction, float(magnitude))


def _lambdas(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    return rng.dirichlet(np.ones(n), size=count) if n > 1 else np.ones((count, 1))


def check_boundary_exclusion(map_: MapFn, instance: ApexInstance, n_t: int = 1000, n_lam: int = 8, seed: int = 0) -> VerificationReport:
    """For lambda with lambda_i = 0 and t in (0, 1), h_i(G) stays below the tolerance."""
    started = time.perf_counter()
    n = instance.n
    rng = np.random.default_rng(seed)
    t = open_grid(0.0, 1.0, n_t)
    worst, witness, total = -np.inf, None, 0
    for i in range(n if n > 1 else 0):
        others = _lambdas(n - 1, n_lam, rng)
        lam = np.insert(others, i, 0.0, axis=1)
        pts = np.column_stack([np.repeat(lam, t.size, axis=0), np.tile(t, n_lam)])
        vals = instance.facet_forms[i](map_(pts))
        total += vals.size
        k = int(np.argmax(vals))
        if vals[k] > worst:
            worst, witness = float(vals[k]), {**witness_of(pts, k), "facet": i, "value": float(vals[k])}
    rep = VerificationReport(
        check="boundary_exclusion",
        n_samples=total,
        seed=seed,
        tolerances={"tol": EXCLUSION_TOL},
        worst_violation=max(0.0, worst) if total else 0.0,
        witness=witness,
    )
    return rep.finish(total == 0 or worst < EXCLUSION_TOL, started)


def check_flaps(map_: MapFn, instance: ApexInstance, delta: float, n: int = 2000, seed: int = 0) -> VerificationReport:
    """G(Delta x ([-delta, 0) u (1, 1 + delta])) stays in the closed simplex sigma-hat."""
    started = time.perf_counter()
    rng = np.random.default_rng(seed)
    t = np.concatenate([rng.uniform(-delta, 0.0, n // 2), 1.0 + rng.uniform(0.0, delta, n - n // 2)])
    t = t[(t != 0.0) & (t != 1.0)]
    pts = np.column_stack([_lambdas(instance.n, t.size, rng), t])
    viol = instance.sigma_hat.violation(map_(pts))
    k = int(np.argmax(viol))
    rep = VerificationReport(
        check="flap_containment",
        n_samples=int(t.size),
        seed=seed,
        tolerances={"tol": FLAP_TOL, "delta": delta},
        worst_violation=float(viol[k]),
        witness=witness_of(pts, k),
    )
    return rep.finish(float(viol[k]) <= FLAP_TOL, started)


def check_interior(map_: MapFn, instance: ApexInstance, n: int = 2000, seed: int = 0) -> VerificationReport:
    """G(Delta x (0, 1)) lies in Int K: every facet form strictly positive."""
    started = time.perf_counter()
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.0, 1.0, n)
    t = t[(t > 0.0) & (t < 1.0)]
    pts = np.column_stack([_lambdas(instance.n, t.size, rng), t])
    margin = instance.interior.margin(map_(pts))
    k = int(np.argmin(margin))
    rep = VerificationReport(
        check="interior",
        n_samples=int(t.size),
        seed=seed,
        worst_violation=max(0.0, -float(margin[k])),
        witness={**witness_of(pts, k), "margin": float(margin[k])},
    )
    return rep.finish(float(margin[k]) > 0.0, started)


@dataclass
class CheckBudget:
    n_targets: int = 200
    n_domain: int = 5000
    n_samples: int = 2000
    refine_steps: int = 30
    seed: int = 0
    threads: Optional[int] = None


def cover_conclusions(map_: MapFn, cover: CoverMap, delta_prime: Optional[float] = None, budget: Optional[CheckBudget] = None) -> List[VerificationReport]:
    """Coverage of sigma-hat, interior, boundary exclusion and flap containment for G."""
    b = budget or CheckBudget()
    inst = cover.instance
    dp = 0.5 * cover.paths.delta if delta_prime is None else delta_prime
    targets = sample(inst.sigma_hat, b.n_targets, b.seed + 1)
    return [
        check_coverage(
            map_,
            cover.domain(0.0, 1.0),
            inst.sigma_hat,
            refine_steps=b.refine_steps,
            seed=b.seed,
            gap_tol=GAP_TOL,
            n_domain=b.n_domain,
            targets=targets,
            threads=b.threads,
        ),
        check_interior(map_, inst, b.n_samples, b.seed),
        check_boundary_exclusion(map_, inst, seed=b.seed),
        check_flaps(map_, inst, dp, b.n_samples, b.seed),
    ]


@dataclass
class RobustnessResult:
    eps_star: float
    eps0: float
    directions: int
    tested: List[Tuple[float, bool]] = field(default_factory=list)
    failure: Optional[Dict[str, Any]] = None

    def to_json(self) -> Dict[str, Any]:
        return {
            "eps_star": self.eps_star,
            "eps0": self.eps0,
            "directions": self.directions,
            "tested": [[m, ok] for m, ok in self.tested],
            "failure": self.failure,
        }


def _first_failure(
    cover: CoverMap, directions: List[Perturbation], magnitude: float, budget: CheckBudget
) -> Optional[Dict[str, Any]]:
    for k, direction in enumerate(directions):
        g = cover if magnitude == 0.0 else perturbed_cover(cover, direction, magnitude)
        for rep in cover_conclusions(g, cover, budget=budget):
            if not rep.passed:
                return {"magnitude": magnitude, "direction": k, "check": rep.check, "worst": rep.worst_violation}
        if magnitude == 0.0:
            break
    return None


def robustness_radius(
    cover: CoverMap,
    *,
    directions: int = DIRECTIONS,
    seed: int = 0,
    start: float = START_MAGNITUDE,
    max_magnitude: float = MAX_MAGNITUDE,
    bisections: int = BISECTIONS,
    budget: Optional[CheckBudget] = None,
) -> RobustnessResult:
    b = budget or CheckBudget(seed=seed)
    dirs = random_directions(cover, directions, seed)
    eps0 = float(path_constants(cover.instance, cover.paths.u, cover.paths.w)["eps0"])
    result = RobustnessResult(eps_star=0.0, eps0=eps0, directions=directions)

    baseline = _first_failure(cover, dirs, 0.0, b)
    result.tested.append((0.0, baseline is None))
    if baseline is not None:
        logger.error("unperturbed cover fails its own conclusions", extra=baseline)
        result.failure = baseline
        return result

    lo, hi = 0.0, None
    m = start
    while m <= max_magnitude:
        fail = _first_failure(cover, dirs, m, b)
        result.tested.append((m, fail is None))
        if fail is not None:
            hi, result.failure = m, fail
            break
        lo = m
        m *= 2.0
    if hi is None:
        # without a failing magnitude eps_star has no witness above it
        raise RobustnessError(
            "cover",
            message="no tested perturbation magnitude breaks the conclusions",
            details={"max_magnitude": max_magnitude, "tested": [[t, ok] for t, ok in result.tested]},
        )
    for _ in range(bisections):
        mid = 0.5 * (lo + hi)
        fail = _first_failure(cover, dirs, mid, b)
        result.tested.append((mid, fail is None))
        if fail is None:
            lo = mid
        else:
            hi, result.failure = mid, fail
    result.eps_star = lo
    if lo == 0.0:
        logger.warning("no tested perturbation magnitude keeps the conclusions", extra={"start": start})
    logger.info("robustness radius", extra={"eps_star": lo, "eps0": eps0, "directions": directions})
    return result
