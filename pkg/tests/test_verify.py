from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from src.errors import CenterHitError, StepTooLargeError
from src.models import LinearForm, ball, interval, model, sphere
from src.polycore import MapExpr, Polynomial
from src.polycore import builders as B
from src.squeeze import ball_double_cover, circle_cover, radial_poly, sandwich_squeeze, simplex_to_ball
from src.verify import (
    VerificationReport,
    check_containment,
    check_coverage,
    check_radiality,
    check_sphere_fixity,
    check_unit_norm,
    chunked_map,
    hausdorff_sampled,
    jet_equal,
    load_reports,
    merge_markdown,
    sign_profile,
    winding_number,
    write_reports,
)


def _circle(n: int, turns: int = 1) -> np.ndarray:
    theta = np.linspace(0.0, 2.0 * np.pi * turns, n * turns, endpoint=False)
    return np.column_stack([np.cos(theta), np.sin(theta)])


def test_identity_containment_passes() -> None:
    rep = check_containment(B.identity(2), ball(2), ball(2), n=5000, seed=0)
    assert rep.passed
    assert rep.worst_violation == 0.0


def test_simplex_map_containment() -> None:
    rep = check_containment(simplex_to_ball(2), model("simplex_solid", 2), ball(2), n=100_000, seed=1, tol=1e-9)
    assert rep.passed


def test_scaling_containment_fails_near_boundary() -> None:
    rep = check_containment(B.scale(2.0, B.identity(2)), ball(2), ball(2), n=10_000, seed=2)
    assert not rep.passed
    assert rep.worst_violation > 2.5
    assert np.linalg.norm(rep.witness["point"]) > 0.95
    assert rep.details["n_outside"] > 0


def test_identity_coverage() -> None:
    rep = check_coverage(B.identity(2), ball(2), ball(2), n_targets=300, seed=0, gap_tol=1e-3)
    assert rep.passed
    assert rep.coverage_gap < 1e-3
    assert rep.coverage_gap <= rep.details["initial_gap"]


def test_double_cover_coverage() -> None:
    rep = check_coverage(ball_double_cover(2), ball(2, radius=3.0), ball(2), n_targets=300, seed=3, refine_steps=60)
    assert rep.passed, rep.to_json()


def test_circle_cover_coverage_at_one_degree() -> None:
    theta = np.deg2rad(np.arange(360.0))
    targets = np.column_stack([np.cos(theta), np.sin(theta)])
    rep = check_coverage(circle_cover(), interval(-1.0, 1.0), sphere(1), targets=targets, seed=0)
    assert rep.passed
    assert rep.n_samples == 360


def test_scaled_down_map_leaves_a_gap() -> None:
    rep = check_coverage(B.scale(0.5, B.identity(2)), ball(2), ball(2), n_targets=200, seed=4)
    assert not rep.passed
    assert rep.coverage_gap > 0.3


def test_diverged_search_counts_as_uncovered() -> None:
    def left_half(x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        return np.where(x > 0.0, np.nan, x)

    rep = check_coverage(left_half, interval(-1.0, 1.0), None, targets=[[-0.5], [0.5]], seed=0)
    assert not rep.passed
    assert rep.coverage_gap == math.inf
    assert rep.details["diverged"] == 1
    assert rep.details["achieved_gap"] < 1e-6
    assert rep.witness["point"] == [0.5]
    assert rep.to_json()["coverage_gap"] == "inf"


def test_more_refinement_never_widens_the_gap() -> None:
    gaps = [
        check_coverage(ball_double_cover(2), ball(2, radius=3.0), ball(2), n_targets=200, seed=3, refine_steps=k).coverage_gap
        for k in (0, 5, 20, 60)
    ]
    assert all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))


@pytest.mark.parametrize(
    "check",
    [
        lambda seed: check_containment(B.scale(1.5, B.identity(2)), ball(2), ball(2), n=10_000, seed=seed),
        lambda seed: check_coverage(B.scale(0.5, B.identity(2)), ball(2), ball(2), n_targets=500, seed=seed),
    ],
    ids=["containment", "coverage"],
)
def test_reseeding_barely_moves_the_worst_violation(check) -> None:
    first, second = check(0), check(1)
    assert first.passed == second.passed
    assert second.worst_violation == pytest.approx(first.worst_violation, rel=0.1)


def test_winding_numbers() -> None:
    assert winding_number(_circle(360), (0.0, 0.0)) == 1
    assert winding_number(_circle(360, turns=2), (0.0, 0.0)) == 2
    assert winding_number(_circle(360)[::-1], (0.0, 0.0)) == -1
    assert winding_number(_circle(360), (3.0, 0.0)) == 0


def test_winding_errors() -> None:
    with pytest.raises(CenterHitError):
        winding_number(_circle(360), (1.0, 0.0))
    with pytest.raises(StepTooLargeError):
        winding_number(_circle(3), (0.0, 0.0))


def _t_power(k: int, coeff_var: int = -1) -> MapExpr:
    exps = [0, 0, k]
    if coeff_var >= 0:
        exps[coeff_var] += 1
    return B.polynomial_map([Polynomial.from_terms(3, [(tuple(exps), 1.0)])])


def test_jet_equal() -> None:
    zero = B.constant([0.0], 3)
    assert jet_equal(_t_power(4), zero, 0.0, 3)
    assert jet_equal(_t_power(2), zero, 0.0, 1)
    assert not jet_equal(_t_power(2), zero, 0.0, 3)
    assert jet_equal(_t_power(2, coeff_var=0), zero, 0.0, 1)
    assert not jet_equal(_t_power(2), zero, 0.5, 0)


def test_sign_profile() -> None:
    path = B.affine([[1.0], [0.0]], [0.0, 0.0])
    x = LinearForm((1.0, 0.0), 0.0)
    positive = LinearForm((0.0, 0.0), 1.0)
    square = Polynomial.from_terms(2, [((2, 0), 1.0)])
    rep = sign_profile(
        path,
        [x, positive, square],
        [[(-1.0, 0.0, -1), (0.0, 1.0, 1)], [(-1.0, 1.0, 1)], [(-1.0, 0.0, 1), (0.0, 1.0, 1)]],
    )
    assert rep.passed
    bad = sign_profile(path, [x], [[(-1.0, 1.0, 1)]])
    assert not bad.passed
    assert bad.witness["t"] < 0.0


def test_property_checks() -> None:
    cert, f = sandwich_squeeze(model("hypercube", 2))
    assert check_sphere_fixity(f, 2, cert.normalization).passed
    g = radial_poly(3, rule="peak").ball_map(2)
    assert check_radiality(g, 2, math.sqrt(3.0)).passed
    assert not check_radiality(B.affine([[0.0, -1.0], [1.0, 0.0]], [0.0, 0.0]), 2, 1.0).passed
    t = np.linspace(-1.0, 1.0, 10_001)[:, None]
    assert check_unit_norm(circle_cover(), t).passed


def test_hausdorff_sampled() -> None:
    a = np.array([[0.0, 0.0], [1.0, 0.0]])
    assert hausdorff_sampled(a, a + [0.0, 0.25]) == pytest.approx(0.25)
    assert hausdorff_sampled(a, a[:1]) == pytest.approx(1.0)


def test_chunked_map_is_order_stable() -> None:
    x = np.random.default_rng(0).normal(size=(1000, 2))
    f = B.norm_sq(B.identity(2))
    serial = chunked_map(f, x, threads=1, chunk=37)
    threaded = chunked_map(f, x, threads=4, chunk=37)
    assert np.array_equal(serial, threaded)


def test_reports_round_trip(tmp_path: Path) -> None:
    rep = check_containment(B.identity(2), ball(2), ball(2), n=100, seed=5)
    path = write_reports(tmp_path / "reports" / "r.json", [rep])
    again = load_reports(path)
    assert again[0].to_json() == rep.to_json()
    table = merge_markdown(again)
    assert "| containment | PASS | 100 | 5 |" in table
    assert isinstance(again[0], VerificationReport)
