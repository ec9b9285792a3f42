from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, MutableMapping

import numpy as np

from ...verify import merge_markdown, write_reports
from ..interfaces import RunContext, Step, StepResult

logger = logging.getLogger("nash_squeeze.orchestrator")

CSV_FORMAT = "%.17g"


def write_cloud(path: Path, points: np.ndarray) -> Path:
    """One row per point, 17 significant digits, '#' header naming the columns."""
    x = np.asarray(points, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    path.parent.mkdir(parents=True, exist_ok=True)
    header = ",".join(f"x{j}" for j in range(x.shape[1]))
    np.savetxt(path, x, fmt=CSV_FORMAT, delimiter=",", header=header)
    return path


def read_cloud(path: Path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", comments="#", ndmin=2)


class ExportStep(Step):
    """Writes reports.json, report.md and clouds/<name>.csv under ctx.out_dir."""

    name = "export"

    def run(self, data: MutableMapping[str, Any], ctx: RunContext) -> StepResult:
        if ctx.dry_run:
            return StepResult.skip("dry_run")
        if ctx.out_dir is None:
            return StepResult.skip("no_out_dir")
        out = Path(ctx.out_dir)
        reports = list(data.get("reports", []))
        files = [str(write_reports(out / "reports.json", reports))]
        md = out / "report.md"
        md.write_text(merge_markdown(reports), encoding="utf-8")
        files.append(str(md))
        for cloud, points in sorted(data.get("clouds", {}).items()):
            files.append(str(write_cloud(out / "clouds" / f"{cloud}.csv", points)))
        logger.info("outputs written", extra={"out_dir": str(out), "files": len(files)})
        return StepResult.ok({"files": files}, files=len(files))
