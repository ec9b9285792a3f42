"""Concatenated apex sweeps over a fan of simplices, fitted by one polynomial path.

The configuration path E lives in R^(n*n) (row j is the j-th moving point).
On [t_i - delta L_i, s_i + delta L_i] it is the apex sweep of instance i,
affinely retimed so that u = 0 lands on t_i and u = 1 on s_i; between sweeps
every point walks straight to a shared interior point q and on to the next
sweep's start. One polynomial gamma with E's order-3 jets at every t_i and
s_i replaces E, and (lambda, tau) -> sum_j lambda_j gamma_j(tau) is the
global map.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import ConnectivityError
from ..models import ConvexPolytope, CornerComplex, sample, simplex_std
from ..pathfit import FitResult, JetSpec, PiecewisePath, PolynomialPath, approx_fit
from ..polycore import MapExpr, compose
from ..polycore import builders as B
from ..verify import VerificationReport, check_containment, check_coverage, hausdorff_sampled
from .covermap import cover_domain
from .instance import ApexInstance, shared_interior_point
from .paths import MAX_DELTA, ApexPaths, apex_pieces, build_apex_paths

logger = logging.getLogger("nash_squeeze.cover")

FAN_ORDER = 3
FAN_EPS = 0.02
FAN_GUARD = 0.01
GAP_TOL = 1e-3
SLICE_SAMPLES = 200


@dataclass(frozen=True, eq=False)
class PolytopeUnion:
    """Union of convex polytopes; margin is the best member margin."""

    members: Tuple[ConvexPolytope, ...]

    @property
    def dimension(self) -> int:
        return self.members[0].dimension

    def margin(self, points: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(points, dtype=float))
        return np.max(np.column_stack([m.margin(x) for m in self.members]), axis=1)

    def violation(self, points: np.ndarray) -> np.ndarray:
        return np.maximum(0.0, -self.margin(points))

    def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        x = np.atleast_2d(np.asarray(points, dtype=float))
        return np.any(np.column_stack([m.contains(x, tol) for m in self.members]), axis=1)


@dataclass(frozen=True, eq=False)
class FanMap:
    """(lambda, tau) -> sum_j lambda_j gamma_j(tau) on Delta_{n-1} x [0, 1]."""

    path: Any
    n: int

    @property
    def domain_dim(self) -> int:
        return self.n + 1

    def rows(self, tau: np.ndarray) -> np.ndarray:
        t = np.atleast_1d(np.asarray(tau, dtype=float))
        return np.asarray(self.path.evaluate(t)).reshape(t.size, self.n, self.n)

    def evaluate(self, lam: np.ndarray, tau: np.ndarray) -> np.ndarray:
        lam = np.atleast_2d(np.asarray(lam, dtype=float))
        return np.einsum("kj,kjc->kc", lam, self.rows(tau))

    def __call__(self, points: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(points, dtype=float))
        return self.evaluate(x[:, : self.n], x[:, self.n])

    def domain(self) -> ConvexPolytope:
        return cover_domain(self.n, 0.0, 1.0)

    def as_mapexpr(self) -> MapExpr:
        n = self.n
        gamma = compose(self.path.to_mapexpr(), B.coordinate(n, n + 1))
        terms = [B.multiply(B.coordinate(j, n + 1), B.select(gamma, range(j * n, (j + 1) * n))) for j in range(n)]
        return B.add(*terms)


@dataclass
class FanResult:
    instances: Tuple[ApexInstance, ...]
    times: Tuple[Tuple[float, float], ...]
    delta: float
    concatenation: PiecewisePath
    fit: FitResult
    map: FanMap
    anchor_residuals: List[Dict[str, float]] = field(default_factory=list)
    reports: List[VerificationReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def to_json(self) -> Dict[str, Any]:
        return {
            "times": [list(ts) for ts in self.times],
            "delta": self.delta,
            "instances": [inst.to_json() for inst in self.instances],
            "fit": self.fit.to_json(),
            "anchor_residuals": list(self.anchor_residuals),
            "reports": [r.to_json() for r in self.reports],
            "passed": self.passed,
        }


def default_times(r: int) -> List[Tuple[float, float]]:
    return [((i + 0.25) / r, (i + 0.75) / r) for i in range(r)]


def _as_instances(source: Union[CornerComplex, Sequence[ApexInstance]]) -> Tuple[ApexInstance, ...]:
    if isinstance(source, CornerComplex):
        return tuple(ApexInstance.from_corner(source, i) for i in range(len(source.bases)))
    return tuple(source)


def _validate_times(times: Sequence[Tuple[float, float]], r: int) -> List[Tuple[float, float]]:
    out = [(float(t), float(s)) for t, s in times]
    flat = [0.0] + [x for ts in out for x in ts] + [1.0]
    if len(out) != r or np.any(np.diff(flat) <= 0):
        raise ValueError("need times 0 < t_1 < s_1 < ... < t_r < s_r < 1, one pair per instance")
    return out


def _fan_delta(deltas: Sequence[float], times: Sequence[Tuple[float, float]]) -> float:
    """Largest common delta keeping retimed sweeps at most halfway into every gap."""
    lengths = [s - t for t, s in times]
    caps = list(deltas)
    caps.append(0.5 * times[0][0] / lengths[0])
    caps.append(0.5 * (1.0 - times[-1][1]) / lengths[-1])
    for i in range(len(times) - 1):
        gap = times[i + 1][0] - times[i][1]
        caps.append(0.5 * gap / (lengths[i] + lengths[i + 1]))
    return float(min(caps))


def _stacked(pieces: Sequence[PolynomialPath], window: Tuple[float, float]) -> PolynomialPath:
    width = max(p.coef.shape[0] for p in pieces)
    coef = np.hstack([np.vstack([p.coef, np.zeros((width - p.coef.shape[0], p.codim))]) for p in pieces])
    return PolynomialPath(coef, window)


def _sweep(base: ApexPaths, delta: float, t: float, s: float) -> List[PolynomialPath]:
    """Configuration pieces of one apex sweep, retimed by u -> t + u (s - t)."""
    paths = apex_pieces(base.instance, base.u, base.w, delta)
    length = s - t
    out = []
    for k, piece in enumerate(paths[0].pieces):
        lo, hi = piece.window
        out.append(_stacked([p.pieces[k] for p in paths], (t + lo * length, t + hi * length)))
    return out


def _at(piece: PolynomialPath, t: float) -> np.ndarray:
    return piece.evaluate(np.array([t]))[0]


def concatenate(
    bases: Sequence[ApexPaths], times: Sequence[Tuple[float, float]], delta: float, bridges: Sequence[np.ndarray]
) -> PiecewisePath:
    n = bases[0].instance.n
    sweeps = [_sweep(base, delta, t, s) for base, (t, s) in zip(bases, times)]
    first, last = sweeps[0][0], sweeps[-1][-1]
    pieces: List[PolynomialPath] = [PolynomialPath.constant(_at(first, first.window[0]), (0.0, first.window[0]))]
    for i, sweep in enumerate(sweeps):
        pieces.extend(sweep)
        if i + 1 < len(sweeps):
            a = sweep[-1].window[1]
            b = sweeps[i + 1][0].window[0]
            mid = 0.5 * (a + b)
            q = np.tile(bridges[i], n)
            pieces.append(PolynomialPath.segment(_at(sweep[-1], a), q, (a, mid)))
            pieces.append(PolynomialPath.segment(q, _at(sweeps[i + 1][0], b), (mid, b)))
    pieces.append(PolynomialPath.constant(_at(last, last.window[1]), (last.window[1], 1.0)))
    return PiecewisePath(tuple(pieces))


def _row_margin(union: PolytopeUnion, n: int) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """Worst moving point's margin in the union."""

    def margin(points: np.ndarray, t: np.ndarray) -> np.ndarray:
        rows = np.asarray(points).reshape(-1, n)
        return union.margin(rows).reshape(-1, n).min(axis=1)

    return margin


def anchor_residuals(
    fan: FanMap, instances: Sequence[ApexInstance], times: Sequence[Tuple[float, float]], seed: int = 0
) -> List[Dict[str, float]]:
    """Vertex residuals of the slices at t_i (base simplex) and s_i (apex), plus sampled Hausdorff."""
    rng = np.random.default_rng(seed)
    lam = rng.dirichlet(np.ones(fan.n), size=SLICE_SAMPLES) if fan.n > 1 else np.ones((SLICE_SAMPLES, 1))
    lam = np.vstack([simplex_std(fan.n).vertices, lam])
    out = []
    for inst, (t, s) in zip(instances, times):
        at_t = fan.rows(np.array([t]))[0]
        at_s = fan.rows(np.array([s]))[0]
        slice_t = fan.evaluate(lam, np.full(lam.shape[0], t))
        out.append(
            {
                "t": t,
                "s": s,
                "base_vertices": float(np.max(np.abs(at_t - inst.vertices))),
                "apex": float(np.max(np.abs(at_s - inst.apex[None, :]))),
                "base_hausdorff": hausdorff_sampled(slice_t, lam @ inst.vertices),
            }
        )
    return out


def fan_cover(
    source: Union[CornerComplex, Sequence[ApexInstance]],
    times: Optional[Sequence[Tuple[float, float]]] = None,
    eps: float = FAN_EPS,
    guard: float = FAN_GUARD,
    *,
    n_targets: int = 200,
    n_domain: int = 20_000,
    n_containment: int = 10_000,
    refine_steps: int = 30,
    seed: int = 0,
    threads: Optional[int] = None,
    verify: bool = True,
    **fit_options,
) -> FanResult:
    """Sweep every simplex of the fan in turn and fit one polynomial path through all sweeps.

    Consecutive instances must share interior points (ConnectivityError
    otherwise); DegreeCapError from the fit propagates. With verify=False only
    the fitted map is built: no residuals, no reports.
    """
    instances = _as_instances(source)
    if not instances:
        raise ValueError("fan needs at least one instance")
    n = instances[0].n
    if any(inst.n != n for inst in instances):
        raise ValueError("all instances must live in the same dimension")
    times = _validate_times(times if times is not None else default_times(len(instances)), len(instances))

    bridges = []
    for i, (a, b) in enumerate(zip(instances, instances[1:])):
        q = shared_interior_point(a.polytope, b.polytope)
        if q is None:
            raise ConnectivityError("cover", message="consecutive instances share no interior point", details={"pair": [i, i + 1]})
        bridges.append(q)

    bases = [build_apex_paths(inst) for inst in instances]
    delta = _fan_delta([min(b.delta, MAX_DELTA) for b in bases], times)
    concat = concatenate(bases, times, delta, bridges)
    union = PolytopeUnion(tuple(inst.polytope for inst in instances))

    anchors = tuple(x for ts in times for x in ts)
    spec = JetSpec(anchors=anchors, jets=tuple(concat.jet(x, FAN_ORDER) for x in anchors), order=FAN_ORDER, interval=(0.0, 1.0))
    fit = approx_fit(concat, spec, eps, _row_margin(union, n), guard=guard, **fit_options)
    fan = FanMap(fit.path, n)
    logger.info("fan path fitted", extra={"instances": len(instances), "degree": fit.degree, "delta": delta})
    if not verify:
        return FanResult(instances, tuple(times), delta, concat, fit, fan)

    residuals = anchor_residuals(fan, instances, times, seed)
    targets = np.vstack([sample(inst.sigma_hat, n_targets, seed + 1 + k) for k, inst in enumerate(instances)])
    reports = [
        check_coverage(
            fan,
            fan.domain(),
            union,
            refine_steps=refine_steps,
            seed=seed,
            gap_tol=GAP_TOL,
            n_domain=n_domain,
            targets=targets,
            threads=threads,
        ),
        check_containment(fan, fan.domain(), union, n_containment, seed, threads=threads),
    ]
    result = FanResult(instances, tuple(times), delta, concat, fit, fan, residuals, reports)
    logger.info("fan cover certified", extra={"passed": result.passed, "gap": reports[0].coverage_gap})
    return result
