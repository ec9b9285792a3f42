from __future__ import annotations

import json

import numpy as np
import pytest

from src.errors import DegreeCapError
from src.orchestrator import cli
from src.orchestrator.config import CommandConfig, env_threads
from src.orchestrator.modules import read_cloud, write_cloud
from src.polycore import loads
from src.squeeze import simplex_to_ball


def test_unknown_subcommand_is_a_usage_error() -> None:
    assert cli.run(["frobnicate"]) == 2


def test_bad_dimension_is_a_usage_error() -> None:
    assert cli.run(["build", "--kind", "simplex-ball", "--dim", "0"]) == 2


def test_models_lists_and_emits(capsys) -> None:
    assert cli.run(["models"]) == 0
    capsys.readouterr()
    assert cli.run(["models", "--kind", "ball", "--dim", "2"]) == 0
    raw = json.loads(capsys.readouterr().out)
    assert raw["dimension"] == 2


def test_build_then_eval_matches_in_memory(tmp_path) -> None:
    map_path = tmp_path / "map.json"
    assert cli.run(["build", "--kind", "simplex-ball", "--dim", "2", "--out", str(map_path)]) == 0
    loaded = loads(map_path.read_text(encoding="utf-8"))
    x = np.random.default_rng(0).uniform(0.0, 0.5, size=(1000, 2))
    assert np.array_equal(loaded(x), simplex_to_ball(2)(x))

    pts = tmp_path / "pts.csv"
    write_cloud(pts, np.zeros((1, 2)))
    out = tmp_path / "img.csv"
    code = cli.run(["eval", "--map", str(map_path), "--points", str(pts), "--format", "csv", "--out", str(out)])
    assert code == 0
    assert np.array_equal(read_cloud(out), simplex_to_ball(2)(np.zeros((1, 2))))


BUILD_KINDS = [pytest.param(k, marks=pytest.mark.slow) if k == "fan" else k for k in sorted(cli.BUILDERS)]


@pytest.mark.parametrize("kind", BUILD_KINDS)
def test_every_build_kind_serializes(kind: str, capsys) -> None:
    assert cli.run(["build", "--kind", kind, "--dim", "2"]) == 0
    map_ = loads(capsys.readouterr().out)
    assert map_.domain_dim >= 1 and map_.codim >= 1
    # x1 > 0 keeps the Nash kinds away from their poles and branch points
    x = np.random.default_rng(4).uniform(0.1, 0.5, size=(50, map_.domain_dim))
    direct = cli.BUILDERS[kind](CommandConfig(subcommand="build", dim=2))
    assert np.allclose(map_(x), direct(x), equal_nan=True)


def test_cover_map_kind_is_the_smoothed_unit_cover(capsys) -> None:
    assert cli.run(["build", "--kind", "cover-map"]) == 0
    map_ = loads(capsys.readouterr().out)
    assert (map_.domain_dim, map_.codim) == (3, 2)
    # vertex weights land on the base vertices at t = 0 and on the apex at t = 1
    corners = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0]])
    assert np.allclose(map_(corners), [[1.0, 0.0], [2.0, 0.0], [1.5, 1.0], [1.5, 1.0]], atol=1e-8)


def test_numeric_failures_exit_3(monkeypatch) -> None:
    def capped(cfg: CommandConfig):
        raise DegreeCapError("pathfit", message="cap reached")

    monkeypatch.setitem(cli.BUILDERS, "circle", capped)
    assert cli.run(["build", "--kind", "circle"]) == 3


def test_verify_signs_and_degree_on_the_default_instance(tmp_path) -> None:
    events = tmp_path / "events.jsonl"
    assert cli.run(["verify", "signs", "--events", str(events)]) == 0
    assert cli.run(["verify", "degree", "--events", str(events), "--format", "markdown", "--out", str(tmp_path / "r.md")]) == 0
    records = [json.loads(line) for line in events.read_text(encoding="utf-8").splitlines()]
    assert [r["check"] for r in records] == ["apex_signs", "boundary_degree"]
    assert all(r["passed"] for r in records)
    assert "boundary_degree" in (tmp_path / "r.md").read_text(encoding="utf-8")


def test_verify_contain_on_a_built_map(tmp_path) -> None:
    map_path = tmp_path / "prism.json"
    assert cli.run(["build", "--kind", "prism-ball", "--dim", "2", "--out", str(map_path)]) == 0
    out = tmp_path / "contain.json"
    args = ["verify", "contain", "--map", str(map_path), "--domain", "prism", "--target", "ball", "--dim", "2"]
    assert cli.run(args + ["--samples", "2000", "--out", str(out)]) == 0
    (rep,) = json.loads(out.read_text(encoding="utf-8"))
    assert rep["check"] == "containment" and rep["passed"] is True


def test_verify_cover_needs_a_map() -> None:
    assert cli.run(["verify", "cover", "--domain", "prism", "--target", "ball"]) == 2


def test_a_failing_check_exits_1(tmp_path) -> None:
    # x -> (x1^2, x2) does not send the square into the unit disc
    map_path = tmp_path / "id.json"
    assert cli.run(["build", "--kind", "p2", "--dim", "2", "--out", str(map_path)]) == 0
    args = ["verify", "contain", "--map", str(map_path), "--domain", "hypercube", "--target", "ball", "--dim", "2"]
    assert cli.run(args + ["--samples", "500", "--out", str(tmp_path / "r.json")]) == 1


def test_demo_circle_writes_clouds_and_reports(tmp_path, capsys) -> None:
    out = tmp_path / "circle"
    events = tmp_path / "events.jsonl"
    assert cli.run(["demo", "circle", "--out", str(out), "--events", str(events)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["passed"] is True
    img = read_cloud(out / "clouds" / "circle_image.csv")
    assert img.shape == (3600, 2)
    assert np.max(np.abs(np.linalg.norm(img, axis=1) - 1.0)) < 1e-12
    kinds = [json.loads(line)["event"] for line in events.read_text(encoding="utf-8").splitlines()]
    assert kinds[-1] == "demo"

    assert cli.run(["report", str(out / "reports.json"), "--out", str(tmp_path / "merged.md")]) == 0
    assert "| unit_norm | PASS |" in (tmp_path / "merged.md").read_text(encoding="utf-8")


def test_demo_reports_are_reproducible(capsys) -> None:
    def strip(raw):
        return [{k: v for k, v in r.items() if k != "wall_time_s"} for r in raw["reports"]]

    runs = []
    for _ in range(2):
        assert cli.run(["demo", "circle", "--dry-run", "--seed", "3", "--targets", "100"]) == 0
        runs.append(strip(json.loads(capsys.readouterr().out)))
    assert runs[0] == runs[1]


def test_threads_fall_back_to_the_environment() -> None:
    assert env_threads({"NASH_SQUEEZE_THREADS": "4"}) == 4
    assert env_threads({"NASH_SQUEEZE_THREADS": "many"}) is None
    assert env_threads({}) is None
