from __future__ import annotations

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, MutableMapping, Optional, Sequence

from ..errors import ModuleError
from .interfaces import RunContext, Step, StepResult

logger = logging.getLogger("nash_squeeze.orchestrator")


@dataclass
class PipelineResult:
    ok: bool
    data: Dict[str, Any]
    results: List[StepResult] = field(default_factory=list)

    @property
    def failure(self) -> Optional[Dict[str, Any]]:
        """Error record of the step that stopped the run, if any."""
        if self.ok or not self.results:
            return None
        return self.results[-1].error

    @property
    def numeric_failure(self) -> bool:
        return bool((self.failure or {}).get("numeric"))

    def steps_json(self) -> List[Dict[str, Any]]:
        return [r.to_json() for r in self.results]


@contextmanager
def started(steps: Sequence[Step], ctx: RunContext) -> Iterator[Sequence[Step]]:
    """init() every step, and shut down the ones that started, last first."""
    live: List[Step] = []
    try:
        for step in steps:
            step.init(ctx)
            live.append(step)
        yield steps
    finally:
        for step in reversed(live):
            try:
                step.shutdown(ctx)
            except Exception:
                logger.exception("step shutdown failed", extra={"step": step.name})


def _failed(name: str, started_at: float, error: Dict[str, Any]) -> StepResult:
    elapsed_ms = int((time.perf_counter() - started_at) * 1000)
    return StepResult("error", {}, {"step": name, "elapsed_ms": elapsed_ms, "error": error})


def run_pipeline(
    steps: Sequence[Step],
    ctx: RunContext,
    data: Optional[MutableMapping[str, Any]] = None,
) -> PipelineResult:
    """Run initialized steps in order; each ok payload is merged into `data`.

    A ModuleError stops the run with its code, owner and numeric flag recorded;
    any other exception stops it as code "exception".
    """
    shared: Dict[str, Any] = dict(data or {})
    results: List[StepResult] = []

    for step in steps:
        t0 = time.perf_counter()
        try:
            res = step.run(shared, ctx)
        except ModuleError as exc:
            logger.error(
                "step raised ModuleError",
                extra={"step": step.name, "code": exc.code, "numeric": exc.numeric, "details": exc.details},
            )
            error = {
                "code": exc.code,
                "message": exc.message,
                "details": dict(exc.details or {}),
                "owner": exc.module,
                "numeric": exc.numeric,
            }
            results.append(_failed(step.name, t0, error))
            return PipelineResult(False, shared, results)
        except Exception as exc:
            logger.exception("step crashed", extra={"step": step.name})
            results.append(_failed(step.name, t0, {"code": "exception", "message": str(exc), "numeric": False}))
            return PipelineResult(False, shared, results)

        if not isinstance(res, StepResult):
            raise TypeError(f"{step.name}: run() must return a StepResult, got {type(res).__name__}")
        meta = {"step": step.name, "elapsed_ms": int((time.perf_counter() - t0) * 1000), **res.meta}
        res = StepResult(res.status, res.payload, meta)
        results.append(res)
        if res.status == "error":
            logger.warning("step reported error", extra={"step": step.name, "error": res.error})
            return PipelineResult(False, shared, results)
        if res.status == "ok":
            shared.update(res.payload)
            logger.info("step finished", extra={"step": step.name, "elapsed_ms": meta["elapsed_ms"]})
        else:
            logger.debug("step skipped", extra={"step": step.name, "reason": meta.get("reason")})

    return PipelineResult(True, shared, results)
