"""Append-only JSONL event trail (`--events PATH`)."""

from __future__ import annotations

import json
import threading
import time
from collections import Counter
from pathlib import Path
from typing import Any, Dict, Iterable


def _now_iso() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()) + f".{int((time.time() % 1) * 1000):03d}Z"


class EventLog:
    """One compact JSON record per line; writing is best effort and never raises.

    Events whose record carries `passed=False` or `ok=False`, or whose name
    mentions an error, are counted per event name.
    """

    def __init__(self, file_path: Path):
        self.file_path = Path(file_path)
        self.file_path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._failures: Counter = Counter()

    def log(self, event: str, **data: Any) -> None:
        rec: Dict[str, Any] = {"ts": _now_iso(), "event": event, **data}
        line = json.dumps(rec, ensure_ascii=False, separators=(",", ":"), default=str)
        try:
            with self._lock:
                with open(self.file_path, "a", encoding="utf-8") as f:
                    f.write(line + "\n")
        except Exception:
            pass

        if "error" in event.lower() or data.get("passed") is False or data.get("ok") is False:
            with self._lock:
                self._failures[event] += 1

    def failures(self, event: str) -> int:
        with self._lock:
            return self._failures[event]

    def all_failures(self) -> Dict[str, int]:
        with self._lock:
            return {k: v for k, v in self._failures.items() if v > 0}

    def total_failures(self) -> int:
        return sum(self.all_failures().values())

    def checks(self, reports: Iterable[Any], **context: Any) -> None:
        """One "check" record per verification report."""
        for r in reports:
            self.log(
                "check",
                check=r.check,
                passed=r.passed,
                worst_violation=r.worst_violation,
                coverage_gap=r.coverage_gap,
                seed=r.seed,
                **context,
            )
