from __future__ import annotations
import sys
from dataclasses import fields
from pathlib import Path
from typing import List

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.orchestrator.config import CommandConfig, load_json  # noqa: E402
from src.orchestrator.default_registry import build_default_registry  # noqa: E402


def _check_defaults(path: Path, issues: List[str]) -> None:
    """defaults.json must only hold CommandConfig fields, with values the CLI would accept."""
    try:
        raw = load_json(path)
    except ValueError as e:
        issues.append(str(e))
        return
    settable = {f.name for f in fields(CommandConfig)} - {"subcommand", "extra", "explicit"}
    for key in sorted(set(raw) - settable):
        issues.append(f"{path.name}: unknown setting {key!r}")
    try:
        CommandConfig(subcommand="validate", **{k: v for k, v in raw.items() if k in settable}).validate()
    except (TypeError, ValueError) as e:
        issues.append(f"{path.name}: {e}")


def _check_demos(config_dir: Path, issues: List[str]) -> None:
    reg = build_default_registry()
    demos = sorted(config_dir.glob("demo_*.json"))
    if not demos:
        issues.append(f"no demo_*.json under {config_dir}")
    for path in demos:
        try:
            cfg = load_json(path)
        except ValueError as e:
            issues.append(str(e))
            continue
        issues.extend(f"{path.name}: {msg}" for msg in reg.problems(cfg))


def validate(root: Path = ROOT) -> List[str]:
    issues: List[str] = []
    config_dir = root / "config"
    _check_defaults(config_dir / "defaults.json", issues)
    _check_demos(config_dir, issues)
    return issues


def main() -> int:
    issues = validate(ROOT)
    if not issues:
        print("CONFIG OK: defaults and every demo pipeline check out.")
        return 0

    print("CONFIG ERRORS:")
    for msg in issues:
        print(f"- {msg}")
    # Non-zero exit so CI/scripts can detect problems.
    return 1


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
