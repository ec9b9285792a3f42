"""VerificationReport and its JSON / markdown renderings."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np

FIELDS = (
    "check",
    "n_samples",
    "seed",
    "tolerances",
    "worst_violation",
    "witness",
    "coverage_gap",
    "passed",
    "wall_time_s",
    "details",
)


@dataclass
class VerificationReport:
    """Outcome of one numerical check.

    `passed` is true iff every recorded violation is within its tolerance;
    builders set it through `finish`.
    """

    check: str
    n_samples: int = 0
    seed: Optional[int] = None
    tolerances: Dict[str, float] = field(default_factory=dict)
    worst_violation: float = 0.0
    witness: Optional[Dict[str, Any]] = None
    coverage_gap: Optional[float] = None
    passed: bool = False
    wall_time_s: float = 0.0
    details: Dict[str, Any] = field(default_factory=dict)

    def finish(self, passed: bool, started: float) -> "VerificationReport":
        self.passed = bool(passed)
        self.wall_time_s = time.perf_counter() - started
        return self

    def to_json(self) -> Dict[str, Any]:
        return _jsonable(asdict(self))

    @classmethod
    def from_json(cls, raw: Mapping[str, Any]) -> "VerificationReport":
        return cls(**{k: raw[k] for k in FIELDS if k in raw})


def witness_of(points: np.ndarray, index: int, **extra: np.ndarray) -> Dict[str, Any]:
    out: Dict[str, Any] = {"point": np.asarray(points[index], dtype=float).tolist()}
    for name, arr in extra.items():
        out[name] = np.asarray(arr[index], dtype=float).tolist()
    return out


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return value


def write_reports(path: Path, reports: Sequence[VerificationReport]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps([r.to_json() for r in reports], indent=2), encoding="utf-8")
    return path


def load_reports(path: Path) -> List[VerificationReport]:
    raw = json.loads(path.read_text(encoding="utf-8"))
    if isinstance(raw, dict):
        raw = raw.get("reports", [raw])
    return [VerificationReport.from_json(r) for r in raw]


def merge_markdown(reports: Iterable[VerificationReport]) -> str:
    lines = [
        "| check | verdict | samples | seed | worst violation | coverage gap | time (s) |",
        "|---|---|---|---|---|---|---|",
    ]
    for r in reports:
        gap = "" if r.coverage_gap is None else f"{float(r.coverage_gap):.3e}"
        lines.append(
            f"| {r.check} | {'PASS' if r.passed else 'FAIL'} | {r.n_samples} | {r.seed} | "
            f"{float(r.worst_violation):.3e} | {gap} | {r.wall_time_s:.2f} |"
        )
    return "\n".join(lines) + "\n"
