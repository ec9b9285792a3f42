"""Command configuration: config/defaults.json, then demo files, then flags."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

from ..verify.parallel import THREADS_ENV

ROOT = Path(__file__).resolve().parent.parent.parent
CONFIG_DIR = ROOT / "config"
DEFAULTS_PATH = CONFIG_DIR / "defaults.json"
FORMATS = ("json", "csv", "markdown")

# flags whose values also override every demo step's options
STEP_OVERRIDES = ("samples", "targets", "tol", "gap_tol", "eps", "refine")


def load_json(path: Path) -> Dict[str, Any]:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ValueError(f"missing JSON file: {path}")
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON in {path}: {exc}")
    if not isinstance(raw, dict):
        raise ValueError(f"{path}: expected a JSON object")
    return raw


def load_defaults(path: Path = DEFAULTS_PATH) -> Dict[str, Any]:
    return load_json(path) if Path(path).exists() else {}


def demo_config_path(name: str) -> Path:
    return CONFIG_DIR / f"demo_{name.replace('-', '_')}.json"


def env_threads(env: Optional[Mapping[str, str]] = None) -> Optional[int]:
    raw = (os.environ if env is None else env).get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return None


@dataclass
class CommandConfig:
    """Everything one CLI invocation needs, after defaults and env are applied."""

    subcommand: str
    kind: Optional[str] = None
    dim: int = 2
    seed: int = 0
    samples: int = 10_000
    targets: int = 500
    tol: float = 1e-9
    gap_tol: float = 1e-3
    eps: float = 0.5
    refine: int = 30
    out: Optional[Path] = None
    format: str = "json"
    threads: Optional[int] = None
    verbose: bool = False
    dry_run: bool = False
    events: Optional[Path] = None
    extra: Dict[str, Any] = field(default_factory=dict)
    explicit: Tuple[str, ...] = ()

    def validate(self) -> "CommandConfig":
        if self.dim < 1:
            raise ValueError("--dim must be at least 1")
        for name in ("tol", "gap_tol", "eps"):
            if not getattr(self, name) > 0:
                raise ValueError(f"--{name.replace('_', '-')} must be positive")
        if self.samples < 1 or self.targets < 1 or self.refine < 0:
            raise ValueError("sample counts must be positive")
        if self.format not in FORMATS:
            raise ValueError(f"--format must be one of {', '.join(FORMATS)}")
        if self.threads is not None and self.threads < 1:
            raise ValueError("--threads must be at least 1")
        return self

    def step_overrides(self) -> Dict[str, Any]:
        """Options explicitly passed on the command line, for demo steps."""
        return {k: getattr(self, k) for k in STEP_OVERRIDES if k in self.explicit}

    @classmethod
    def from_namespace(
        cls,
        ns: Any,
        defaults: Optional[Mapping[str, Any]] = None,
        env: Optional[Mapping[str, str]] = None,
    ) -> "CommandConfig":
        values: Dict[str, Any] = {}
        known = {f.name for f in fields(cls)} - {"subcommand", "extra", "explicit"}
        for key, value in (defaults or {}).items():
            if key in known:
                values[key] = value
        given = vars(ns)
        for key in known:
            if given.get(key) is not None:
                values[key] = given[key]
        if values.get("threads") is None:
            values["threads"] = env_threads(env)
        for key in ("out", "events"):
            if values.get(key) is not None:
                values[key] = Path(values[key])
        extra = {k: v for k, v in given.items() if k not in known and k != "subcommand"}
        explicit = tuple(k for k in STEP_OVERRIDES if given.get(k) is not None)
        return cls(subcommand=ns.subcommand, extra=extra, explicit=explicit, **values).validate()
