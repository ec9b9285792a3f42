"""Command line: python -m src.orchestrator.cli <subcommand> ...

Exit codes: 0 every check passed, 1 a verification failed, 2 usage or input
error, 3 numeric failure (degree cap, ill-conditioning, no delta, ...).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from rich.console import Console
from rich.table import Table

from ..cover import ApexInstance, build_apex_paths, cover_map, degree_report, fan_cover, sign_conditions, smooth_paths
from ..errors import ModuleError
from ..models import KINDS, corner_complex, model, set_from_json
from ..polycore import MapExpr, Polynomial, dumps, loads
from ..squeeze import (
    arc_cover,
    ball_double_cover,
    circle_cover,
    cube_to_ball,
    cylinder_to_ball,
    interval_to_ball,
    prism_to_ball,
    radial_poly,
    simplex_to_ball,
    sphere_to_ball,
    stereographic_inverse,
)
from ..unbounded import P1, P2, P3, f_ell, halfspace_chain, inversion, norm_flatten, puncture_lift, shear, tangent_cover
from ..verify import VerificationReport, check_containment, check_coverage, load_reports, merge_markdown
from .config import CommandConfig, demo_config_path, load_defaults, load_json
from .default_registry import build_default_registry
from .events import EventLog
from .interfaces import RunContext
from .modules import DEMOS, read_cloud, write_cloud
from .runner import run_pipeline, started

logger = logging.getLogger("nash_squeeze.cli")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

console = Console(stderr=True)


def _setup_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s %(message)s")


BUILDERS: Dict[str, Callable[[CommandConfig], MapExpr]] = {
    "simplex-ball": lambda c: simplex_to_ball(c.dim),
    "cube-ball": lambda c: cube_to_ball(c.dim),
    "prism-ball": lambda c: prism_to_ball(c.dim),
    "cylinder-ball": lambda c: cylinder_to_ball(c.dim),
    "stereo-inverse": lambda c: stereographic_inverse(c.dim),
    "ball-double-cover": lambda c: ball_double_cover(c.dim),
    "circle": lambda c: circle_cover(),
    "f-ell": lambda c: f_ell(int(c.extra.get("ell") or 2), max(c.dim, 2)),
    "p1": lambda c: P1(float(c.extra.get("n1") or 1.0), float(c.extra.get("n2") or 1.0), c.dim),
    "p2": lambda c: P2(c.dim),
    "p3": lambda c: P3(c.dim),
    "inversion": lambda c: inversion(c.dim),
    "norm-flatten": lambda c: norm_flatten(c.dim),
    "tangent-cover": lambda c: tangent_cover(c.dim + 1, c.dim, np.zeros(c.dim + 1), np.eye(c.dim, c.dim + 1), c.eps),
    "radial-h": lambda c: radial_poly(2 * c.dim * c.dim).h_map(),
    "sphere-ball": lambda c: sphere_to_ball(c.dim),
    "interval-ball": lambda c: interval_to_ball(0.0, 1.0),
    "arc": lambda c: arc_cover(0.0, math.pi / 2),
    "shear": lambda c: shear(3, [Polynomial.univariate([0.0, 0.0, 1.0])] * (max(c.dim, 2) - 1)),
    "puncture-lift": lambda c: puncture_lift(np.zeros(c.dim)),
    "halfplane-chain": lambda c: halfspace_chain(
        int(c.extra.get("ell") or 2), float(c.extra.get("n1") or 1.0), float(c.extra.get("n2") or 1.0), max(c.dim, 2)
    ).squeeze(),
    # the unit triangle in [0, 3]^2 and the diamond; both planar whatever --dim says
    "cover-map": lambda c: cover_map(smooth_paths(build_apex_paths(ApexInstance.unit_triangle_in_square()))).as_mapexpr(),
    "fan": lambda c: fan_cover(corner_complex(2, 0), verify=False).map.as_mapexpr(),
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--targets", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--gap-tol", dest="gap_tol", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--refine", type=int)
    p.add_argument("--out", type=str)
    p.add_argument("--format", type=str, choices=("json", "csv", "markdown"))
    p.add_argument("--threads", type=int, help="worker cap (falls back to NASH_SQUEEZE_THREADS)")
    p.add_argument("--events", type=str, help="append one JSON record per finished check to this file")
    p.add_argument("--verbose", action="store_true", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nash_squeeze", description="Explicit polynomial and Nash surjections, numerically certified")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("models", help="list the model sets or emit one as JSON")
    p.add_argument("--kind", choices=KINDS)
    _common(p)

    p = sub.add_parser("build", help="construct a named map and emit its JSON")
    p.add_argument("--kind", required=True, choices=sorted(BUILDERS))
    p.add_argument("--ell", type=int)
    p.add_argument("--n1", type=float)
    p.add_argument("--n2", type=float)
    _common(p)

    p = sub.add_parser("eval", help="apply a serialized map to the points of a CSV file")
    p.add_argument("--map", dest="map_path", required=True)
    p.add_argument("--points", required=True)
    _common(p)

    p = sub.add_parser("verify", help="run one check on serialized inputs")
    p.add_argument("check", choices=("contain", "cover", "degree", "signs"))
    p.add_argument("--map", dest="map_path")
    p.add_argument("--domain", help="model kind or set JSON")
    p.add_argument("--target", help="model kind or set JSON")
    p.add_argument("--target-dim", dest="target_dim", type=int)
    p.add_argument("--instance", help="apex instance JSON (default: unit triangle in [0, 3]^2)")
    _common(p)

    p = sub.add_parser("demo", help="canned end-to-end run")
    p.add_argument("name", choices=sorted(DEMOS))
    p.add_argument("--config", help="pipeline config (default: config/demo_<name>.json)")
    p.add_argument("--dry-run", dest="dry_run", action="store_true", default=None, help="compute everything, write nothing")
    _common(p)

    p = sub.add_parser("report", help="merge report JSON files into one markdown table")
    p.add_argument("inputs", nargs="+")
    _common(p)
    return parser


# output


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")


def _report_table(reports: Sequence[VerificationReport], title: str) -> Table:
    table = Table(title=title)
    for col in ("check", "verdict", "samples", "worst violation", "coverage gap", "time (s)"):
        table.add_column(col)
    for r in reports:
        gap = "" if r.coverage_gap is None else f"{float(r.coverage_gap):.3e}"
        verdict = "[green]PASS[/]" if r.passed else "[red]FAIL[/]"
        table.add_row(r.check, verdict, str(r.n_samples), f"{float(r.worst_violation):.3e}", gap, f"{r.wall_time_s:.2f}")
    return table


def _log_checks(events: Optional[EventLog], reports: Sequence[VerificationReport], **context: Any) -> None:
    if events is not None:
        events.checks(reports, **context)


def _emit_reports(reports: Sequence[VerificationReport], cfg: CommandConfig) -> None:
    if cfg.format == "markdown":
        _emit(merge_markdown(reports), cfg.out)
    else:
        _emit(json.dumps([r.to_json() for r in reports], indent=2), cfg.out)


# subcommands


def cmd_models(cfg: CommandConfig, events: Optional[EventLog]) -> int:
    if cfg.kind is None:
        table = Table(title="models")
        table.add_column("kind")
        for k in KINDS:
            table.add_row(k)
        console.print(table)
        return EXIT_OK
    _emit(json.dumps(model(cfg.kind, cfg.dim).to_json(), indent=2), cfg.out)
    return EXIT_OK


def cmd_build(cfg: CommandConfig, events: Optional[EventLog]) -> int:
    kind = str(cfg.kind)
    map_ = BUILDERS[kind](cfg)
    _emit(dumps(map_), cfg.out)
    logger.info("map built", extra={"kind": kind, "dim": cfg.dim, "polynomial": map_.is_polynomial})
    return EXIT_OK


def cmd_eval(cfg: CommandConfig, events: Optional[EventLog]) -> int:
    map_ = loads(Path(cfg.extra["map_path"]).read_text(encoding="utf-8"))
    x = read_cloud(Path(cfg.extra["points"]))
    y = map_(x)
    if cfg.format == "csv":
        if cfg.out is None:
            np.savetxt(sys.stdout, y, fmt="%.17g", delimiter=",")
        else:
            write_cloud(cfg.out, y)
    else:
        _emit(json.dumps({"points": x.tolist(), "images": np.asarray(y).tolist()}), cfg.out)
    return EXIT_OK


def _set_arg(value: Optional[str], dim: int, flag: str) -> Any:
    if not value:
        raise ValueError(f"verify needs {flag}")
    if value.endswith(".json"):
        return set_from_json(load_json(Path(value)))
    return model(value.replace("-", "_"), dim)


def _instance(cfg: CommandConfig) -> ApexInstance:
    path = cfg.extra.get("instance")
    return ApexInstance.from_json(load_json(Path(path))) if path else ApexInstance.unit_triangle_in_square()


def cmd_verify(cfg: CommandConfig, events: Optional[EventLog]) -> int:
    check = cfg.extra["check"]
    if check in ("contain", "cover"):
        path = cfg.extra.get("map_path")
        if not path:
            raise ValueError(f"verify {check} needs --map")
        map_ = loads(Path(path).read_text(encoding="utf-8"))
        domain = _set_arg(cfg.extra.get("domain"), cfg.dim, "--domain")
        target = _set_arg(cfg.extra.get("target"), cfg.extra.get("target_dim") or map_.codim, "--target")
        if check == "contain":
            reports = [check_containment(map_, domain, target, cfg.samples, cfg.seed, cfg.tol, threads=cfg.threads)]
        else:
            reports = [
                check_coverage(
                    map_,
                    domain,
                    target,
                    cfg.targets,
                    cfg.seed,
                    cfg.gap_tol,
                    cfg.refine,
                    n_domain=cfg.samples,
                    threads=cfg.threads,
                )
            ]
    else:
        paths = build_apex_paths(_instance(cfg))
        reports = [degree_report(cover_map(paths))] if check == "degree" else [sign_conditions(paths)]
    console.print(_report_table(reports, f"verify {check}"))
    _log_checks(events, reports, command=f"verify {check}")
    _emit_reports(reports, cfg)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _demo_config(cfg: CommandConfig, name: str) -> Dict[str, Any]:
    given = cfg.extra.get("config")
    path = Path(given) if given else demo_config_path(name)
    if path.exists() or given:
        raw = load_json(path)
    else:
        raw = {"pipeline": [DEMOS[name].name, "export"]}
    return {**raw, "overrides": cfg.step_overrides()}


def cmd_demo(cfg: CommandConfig, events: Optional[EventLog]) -> int:
    name = cfg.extra["name"]
    demo_cfg = _demo_config(cfg, name)
    seed = cfg.seed if cfg.extra.get("seed_given") else int(demo_cfg.get("seed", cfg.seed))
    ctx = RunContext(
        dry_run=bool(cfg.dry_run),
        seed=seed,
        threads=cfg.threads,
        out_dir=cfg.out if cfg.out is not None else Path("runs") / name,
        config=demo_cfg,
        events=events,
    )
    steps = build_default_registry().build(demo_cfg)
    with started(steps, ctx), console.status(f"demo {name}"):
        res = run_pipeline(steps, ctx)

    reports: List[VerificationReport] = list(res.data.get("reports", []))
    console.print(_report_table(reports, f"demo {name}"))
    _log_checks(events, reports, command=f"demo {name}")
    passed = res.ok and all(r.passed for r in reports)
    if events is not None:
        events.log("demo", name=name, ok=res.ok, passed=passed, seed=seed)
    summary = {
        "demo": name,
        "ok": res.ok,
        "passed": passed,
        "seed": seed,
        "reports": [r.to_json() for r in reports],
        "files": res.data.get("files", []),
        "steps": res.steps_json(),
    }
    sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True, default=str) + "\n")
    if not res.ok:
        return EXIT_NUMERIC if res.numeric_failure else EXIT_USAGE
    return EXIT_OK if passed else EXIT_FAIL


def cmd_report(cfg: CommandConfig, events: Optional[EventLog]) -> int:
    reports: List[VerificationReport] = []
    for path in cfg.extra["inputs"]:
        reports.extend(load_reports(Path(path)))
    console.print(_report_table(reports, "merged reports"))
    _emit(merge_markdown(reports), cfg.out)
    return EXIT_OK


HANDLERS: Dict[str, Callable[[CommandConfig, Optional[EventLog]], int]] = {
    "models": cmd_models,
    "build": cmd_build,
    "eval": cmd_eval,
    "verify": cmd_verify,
    "demo": cmd_demo,
    "report": cmd_report,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)
    ns.seed_given = ns.seed is not None
    try:
        cfg = CommandConfig.from_namespace(ns, load_defaults())
    except ValueError as exc:
        console.print(f"[red]usage error:[/] {exc}")
        return EXIT_USAGE
    _setup_logging(cfg.verbose)
    events = EventLog(cfg.events) if cfg.events is not None else None
    try:
        return HANDLERS[cfg.subcommand](cfg, events)
    except ModuleError as exc:
        logger.error(
            "command failed",
            extra={"owner": exc.module, "code": exc.code, "numeric": exc.numeric, "details": exc.details},
        )
        console.print(f"[red]{exc.module}:{exc.code}[/] {exc.message}")
        if events is not None:
            events.log("error", command=cfg.subcommand, code=exc.code, numeric=exc.numeric)
        return EXIT_NUMERIC if exc.numeric else EXIT_USAGE
    except (ValueError, KeyError, FileNotFoundError) as exc:
        console.print(f"[red]usage error:[/] {exc}")
        return EXIT_USAGE


def main() -> int:
    return run()


if __name__ == "__main__":
    raise SystemExit(main())
