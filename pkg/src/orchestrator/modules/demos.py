"""Canned end-to-end runs, one pipeline step per construction."""

from __future__ import annotations

import time
from typing import Any, ClassVar, Dict, MutableMapping

import numpy as np

from ...cover import (
    ApexInstance,
    CheckBudget,
    build_apex_paths,
    cover_conclusions,
    cover_map,
    degree_report,
    fan_cover,
    sign_conditions,
)
from ...models import SemialgebraicSet, ball, corner_complex, interval, prism, sample, sphere
from ...polycore import builders as B
from ...polycore.mapexpr import compose
from ...squeeze import circle_cover, prism_to_ball
from ...unbounded import halfspace_chain, sample_fence, tangent_cover, tangent_disc
from ...verify import VerificationReport, check_containment, check_coverage, check_unit_norm
from ..interfaces import RunContext, Step, StepResult
from .base import CLOUD_CAP, finished


def grid_targets(half_width: float, n: int, d: int) -> np.ndarray:
    g = np.linspace(-half_width, half_width, n)
    return np.stack(np.meshgrid(*([g] * d), indexing="ij"), axis=-1).reshape(-1, d)


class SimplexCoverDemo(Step):
    """Apex paths and cover map for one instance (default: unit triangle in [0, 3]^2)."""

    name = "simplex_cover"
    options: ClassVar[Dict[str, Any]] = {
        "instance": None,
        "samples": 2000,
        "targets": 200,
        "n_domain": 5000,
        "refine": 30,
    }

    def run(self, data: MutableMapping[str, Any], ctx: RunContext) -> StepResult:
        o = self.opts
        raw = o["instance"]
        inst = ApexInstance.from_json(raw) if raw else ApexInstance.unit_triangle_in_square()
        paths = build_apex_paths(inst)
        cover = cover_map(paths)
        reports = [sign_conditions(paths)]
        if inst.n == 2:
            reports.append(degree_report(cover))
        budget = CheckBudget(
            n_targets=o["targets"],
            n_domain=o["n_domain"],
            n_samples=o["samples"],
            refine_steps=o["refine"],
            seed=ctx.seed,
            threads=ctx.threads,
        )
        reports += cover_conclusions(cover, cover, budget=budget)
        x = sample(cover.domain(*paths.window), CLOUD_CAP, ctx.seed)
        clouds = {"cover_domain": x, "cover_image": cover(x)}
        return finished(data, reports, clouds, instance=inst.to_json(), paths=paths.to_json())


class CircleDemo(Step):
    """[-1, 1] onto S^1 through the inverse stereographic projection and complex squaring."""

    name = "circle"
    options: ClassVar[Dict[str, Any]] = {"samples": 3600, "targets": 500, "tol": 1e-12, "gap_tol": 1e-3, "refine": 30}

    def run(self, data: MutableMapping[str, Any], ctx: RunContext) -> StepResult:
        o = self.opts
        map_ = circle_cover()
        t = np.linspace(-1.0, 1.0, int(o["samples"]))[:, None]
        reports = [
            check_unit_norm(map_, t, tol=o["tol"], seed=ctx.seed),
            check_coverage(
                map_,
                interval(-1.0, 1.0),
                sphere(1),
                o["targets"],
                ctx.seed,
                o["gap_tol"],
                o["refine"],
                threads=ctx.threads,
            ),
        ]
        return finished(data, reports, {"circle_domain": t, "circle_image": map_(t)})


class HalfplaneDemo(Step):
    """P3 o P2 o P1 from the fence onto a square, with every chain formula checked."""

    name = "halfplane"
    options: ClassVar[Dict[str, Any]] = {
        "ell": 3,
        "n1": 1.0,
        "n2": 1.0,
        "d": 2,
        "samples": 1000,
        "grid": 21,
        "half_width": 5.0,
        "spread": 3.0,
        "depth": 3.0,
        "n_domain": 20_000,
        "refine": 40,
        "gap_tol": 1e-2,
        "tol": 1e-10,
    }

    def _formula_report(self, residuals: Dict[str, float], n: int, ctx: RunContext) -> VerificationReport:
        started = time.perf_counter()
        worst = max(residuals, key=residuals.get)
        rep = VerificationReport(
            check="chain_formulas",
            n_samples=n * len(residuals),
            seed=ctx.seed,
            tolerances={"tol": self.opts["tol"]},
            worst_violation=residuals[worst],
            witness={"component": worst},
            details={"residuals": residuals},
        )
        return rep.finish(rep.worst_violation <= self.opts["tol"], started)

    def run(self, data: MutableMapping[str, Any], ctx: RunContext) -> StepResult:
        o = self.opts
        d, n1, n2, spread = int(o["d"]), float(o["n1"]), float(o["n2"]), float(o["spread"])
        chain = halfspace_chain(int(o["ell"]), n1, n2, d)
        n = int(o["samples"])
        x = sample_fence(n1, n2, d, n, ctx.seed, spread=spread, depth=float(o["depth"]))
        # the fence cut down to a box, so the coverage net can be sampled
        top = n1 + n2 * (d - 1) * spread**2 + float(o["depth"])
        window = SemialgebraicSet(d, chain.fence().union, bbox=((n1,) + (-spread,) * (d - 1), (top,) + (spread,) * (d - 1)))
        reports = [
            self._formula_report(chain.check(n, ctx.seed), n, ctx),
            check_containment(chain.components["f_ell"], window, chain.image_bound(), seed=ctx.seed, tol=o["tol"], points=x),
            check_coverage(
                chain.squeeze(),
                window,
                None,
                seed=ctx.seed,
                gap_tol=o["gap_tol"],
                refine_steps=o["refine"],
                n_domain=o["n_domain"],
                targets=grid_targets(float(o["half_width"]), int(o["grid"]), d),
                threads=ctx.threads,
            ),
        ]
        clouds = {"fence": x, "fence_image": chain.squeeze()(x), "f_ell_image": chain.components["f_ell"](x)}
        return finished(data, reports, clouds)


class PrismBallDemo(Step):
    """Sandwich squeeze of the prism onto the closed ball."""

    name = "prism_ball"
    options: ClassVar[Dict[str, Any]] = {
        "d": 3,
        "samples": 10_000,
        "targets": 500,
        "n_domain": 20_000,
        "tol": 1e-9,
        "gap_tol": 1e-3,
        "refine": 30,
    }

    def run(self, data: MutableMapping[str, Any], ctx: RunContext) -> StepResult:
        o = self.opts
        d = int(o["d"])
        map_, domain, target = prism_to_ball(d), prism(d), ball(d)
        reports = [
            check_containment(map_, domain, target, o["samples"], ctx.seed, o["tol"], threads=ctx.threads),
            check_coverage(
                map_,
                domain,
                target,
                o["targets"],
                ctx.seed,
                o["gap_tol"],
                o["refine"],
                n_domain=o["n_domain"],
                threads=ctx.threads,
            ),
        ]
        x = sample(domain, CLOUD_CAP, ctx.seed)
        return finished(data, reports, {"prism": x, "prism_image": map_(x)})


class FanDemo(Step):
    """One polynomial path sweeping every simplex of a corner complex."""

    name = "fan"
    options: ClassVar[Dict[str, Any]] = {
        "d": 2,
        "k": 0,
        "eps": 0.02,
        "guard": 0.01,
        "targets": 200,
        "n_domain": 20_000,
        "samples": 10_000,
        "refine": 30,
    }

    def run(self, data: MutableMapping[str, Any], ctx: RunContext) -> StepResult:
        o = self.opts
        res = fan_cover(
            corner_complex(int(o["d"]), int(o["k"])),
            eps=o["eps"],
            guard=o["guard"],
            n_targets=o["targets"],
            n_domain=o["n_domain"],
            n_containment=o["samples"],
            refine_steps=o["refine"],
            seed=ctx.seed,
            threads=ctx.threads,
        )
        x = sample(res.map.domain(), CLOUD_CAP, ctx.seed)
        return finished(data, res.reports, {"fan_domain": x, "fan_image": res.map(x)}, fan=res.to_json())


class TangentCoverDemo(Step):
    """The eps-disc of a tangent plane onto the closed ball of its dimension."""

    name = "tangent_cover"
    options: ClassVar[Dict[str, Any]] = {
        "m": 3,
        "d": 2,
        "p": [0.2, -0.1, 0.4],
        "frame": [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8]],
        "eps": 0.5,
        "samples": 10_000,
        "targets": 500,
        "n_domain": 20_000,
        "tol": 1e-12,
        "gap_tol": 1e-3,
        "refine": 30,
    }

    def run(self, data: MutableMapping[str, Any], ctx: RunContext) -> StepResult:
        o = self.opts
        m, d, eps = int(o["m"]), int(o["d"]), float(o["eps"])
        g = tangent_cover(m, d, o["p"], o["frame"], eps)
        # the disc in frame coordinates: y in B_d -> p + eps * y @ frame
        disc = compose(g, B.affine(eps * np.asarray(o["frame"], dtype=float).T, o["p"]))
        unit = ball(d)
        reports = [
            check_containment(disc, unit, unit, o["samples"], ctx.seed, o["tol"], threads=ctx.threads),
            check_coverage(
                disc,
                unit,
                unit,
                o["targets"],
                ctx.seed,
                o["gap_tol"],
                o["refine"],
                n_domain=o["n_domain"],
                threads=ctx.threads,
            ),
        ]
        x = tangent_disc(o["p"], o["frame"], eps, CLOUD_CAP, ctx.seed)
        return finished(data, reports, {"tangent_disc": x, "tangent_image": g(x)})


DEMOS = {
    "simplex-cover": SimplexCoverDemo,
    "circle": CircleDemo,
    "halfplane": HalfplaneDemo,
    "prism-ball": PrismBallDemo,
    "fan": FanDemo,
    "tangent-cover": TangentCoverDemo,
}
