from __future__ import annotations

import re
from pathlib import Path


_IMPORT_RE = re.compile(r"^\s*(from|import)\s+(\.\.orchestrator|src\.orchestrator|rich)\b", re.MULTILINE)

LIBRARY_PACKAGES = ("polycore", "models", "squeeze", "cover", "pathfit", "unbounded", "verify")


def _iter_python_files(root: Path) -> list[Path]:
    if not root.exists():
        return []
    return [p for p in root.rglob("*.py") if p.is_file()]


def test_library_packages_do_not_reach_into_the_cli_layer() -> None:
    """Prevent drift: construction and verification code stays importable without the CLI.

    Only src/orchestrator/** may import the orchestrator or rich.
    """

    repo_root = Path(__file__).resolve().parents[1]

    offenders: list[tuple[Path, int, str]] = []
    for pkg in LIBRARY_PACKAGES:
        for path in _iter_python_files(repo_root / "src" / pkg):
            text = path.read_text(encoding="utf-8", errors="replace")
            for m in _IMPORT_RE.finditer(text):
                line_no = text.count("\n", 0, m.start()) + 1
                offenders.append((path.relative_to(repo_root), line_no, m.group(0).strip()))

    assert not offenders, "CLI-layer imports in library code:\n" + "\n".join(
        f"{p}:{n}: {line}" for p, n, line in offenders
    )


def test_every_logger_lives_under_the_project_namespace() -> None:
    repo_root = Path(__file__).resolve().parents[1]
    pattern = re.compile(r"getLogger\(\"([^\"]+)\"\)")
    names = []
    for path in _iter_python_files(repo_root / "src"):
        names += pattern.findall(path.read_text(encoding="utf-8"))
    assert names
    assert all(n == "nash_squeeze" or n.startswith("nash_squeeze.") for n in names)
