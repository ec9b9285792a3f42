from ..errors import ModuleError
from .events import EventLog
from .interfaces import RunContext, Step, StepResult, resolve_options
from .registry import Registry
from .runner import PipelineResult, run_pipeline, started

__all__ = [
    "EventLog",
    "ModuleError",
    "PipelineResult",
    "Registry",
    "RunContext",
    "Step",
    "StepResult",
    "resolve_options",
    "run_pipeline",
    "started",
]
