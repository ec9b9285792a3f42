"""Contract between the demo runner and its steps."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Any, ClassVar, Dict, Mapping, MutableMapping, Optional

if TYPE_CHECKING:
    from .events import EventLog


STATUSES = ("ok", "skip", "error")

# top-level demo config keys that are not step blocks
RESERVED_KEYS = ("pipeline", "seed", "overrides")


@dataclass
class RunContext:
    """What every step of one demo run shares.

    `config` is the demo config with the CLI overrides under "overrides".
    With `dry_run` set, steps compute everything but write no files.
    """

    dry_run: bool = False
    seed: int = 0
    threads: Optional[int] = None
    out_dir: Optional[Path] = None
    config: Mapping[str, Any] = field(default_factory=dict)
    events: Optional["EventLog"] = None


@dataclass(frozen=True)
class StepResult:
    status: str
    payload: Dict[str, Any] = field(default_factory=dict)
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"invalid step status {self.status!r}")
        if not isinstance(self.payload, dict) or not isinstance(self.meta, dict):
            raise ValueError("payload and meta must be dicts")

    @classmethod
    def ok(cls, payload: Optional[Dict[str, Any]] = None, **meta: Any) -> "StepResult":
        return cls("ok", dict(payload or {}), meta)

    @classmethod
    def skip(cls, reason: str, **meta: Any) -> "StepResult":
        return cls("skip", {}, {"reason": reason, **meta})

    @property
    def error(self) -> Optional[Dict[str, Any]]:
        return self.meta.get("error")

    def to_json(self) -> Dict[str, Any]:
        return {"status": self.status, **self.meta}


def resolve_options(config: Mapping[str, Any], name: str, declared: Mapping[str, Any]) -> Dict[str, Any]:
    """Declared defaults, then the config block named after the step, then CLI overrides.

    Overrides only reach options the step declares; an undeclared key in the
    step's own block is an error.
    """
    block = config.get(name) or {}
    if not isinstance(block, Mapping):
        raise ValueError(f"config block {name!r} must be an object")
    unknown = sorted(set(block) - set(declared))
    if unknown:
        raise ValueError(f"{name}: unknown options {unknown}")
    overrides = {k: v for k, v in (config.get("overrides") or {}).items() if k in declared}
    return {**declared, **block, **overrides}


class Step(ABC):
    """One named stage of a demo pipeline.

    init() resolves `opts` from the declared `options`; run() is called once
    per pipeline run; shutdown() runs in reverse order, also after a failure.
    Steps are deterministic for a fixed ctx.seed.
    """

    name: ClassVar[str] = ""
    options: ClassVar[Mapping[str, Any]] = {}

    def __init__(self) -> None:
        self.opts: Dict[str, Any] = dict(self.options)

    def init(self, ctx: RunContext) -> None:
        self.opts = resolve_options(ctx.config, self.name, self.options)

    @abstractmethod
    def run(self, data: MutableMapping[str, Any], ctx: RunContext) -> StepResult:
        """Read what earlier steps left in `data`; the payload is merged into it."""

    def shutdown(self, ctx: RunContext) -> None:
        return None
