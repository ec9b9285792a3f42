from __future__ import annotations

import dataclasses
import math
from types import SimpleNamespace

import numpy as np
import pytest

from src.errors import (
    ConnectivityError,
    DimensionMismatchError,
    InfeasibleWError,
    InvalidInstanceError,
    RobustnessError,
    UndefinedAtCenterError,
)
from src.models import ConvexPolytope, corner_complex, simplex_std
from src.cover import (
    ApexInstance,
    CheckBudget,
    PolytopeUnion,
    boundary_degree,
    build_apex_paths,
    cover_conclusions,
    cover_map,
    default_times,
    degree_report,
    exterior_cells,
    fan_cover,
    path_constants,
    perturbed_cover,
    radial_retraction,
    random_directions,
    robustness_radius,
    shared_interior_point,
    sign_conditions,
    smooth_paths,
    solve_w,
)
from src.verify import check_coverage

SMALL = CheckBudget(n_targets=40, n_domain=3000, n_samples=400, refine_steps=30)


@pytest.fixture(scope="module")
def unit_paths():
    return build_apex_paths(ApexInstance.unit_triangle_in_square())


@pytest.fixture(scope="module")
def unit_cover(unit_paths):
    return cover_map(unit_paths)


def _triangle() -> ConvexPolytope:
    return ConvexPolytope.from_vertices([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


# radial retraction


def test_retraction_sends_the_far_corner_to_the_hypotenuse() -> None:
    rho = radial_retraction(_triangle(), [0.25, 0.25])
    assert np.allclose(rho(np.array([[1.0, 1.0]])), [[0.5, 0.5]], atol=1e-12)


def test_retraction_fixes_the_boundary() -> None:
    rho = radial_retraction(_triangle(), [0.25, 0.25])
    pts = np.array([[0.5, 0.0], [0.0, 0.3], [0.4, 0.6], [1.0, 0.0]])
    assert np.allclose(rho(pts), pts, atol=1e-12)


def test_retraction_is_idempotent_and_lands_on_a_facet() -> None:
    tri = _triangle()
    rho = radial_retraction(tri, [0.25, 0.25])
    x = np.random.default_rng(0).uniform(-2.0, 2.0, size=(10_000, 2))
    x = x[np.linalg.norm(x - 0.25, axis=1) > 1e-3]
    once = rho(x)
    assert np.max(np.abs(rho(once) - once)) < 1e-9
    assert np.max(np.abs(np.min(tri.facet_values(once), axis=1))) < 1e-9


def test_retraction_small_step_right_hits_the_slanted_facet() -> None:
    rho = radial_retraction(_triangle(), [0.25, 0.25])
    got = rho(np.array([[0.26, 0.25]]))[0]
    assert np.allclose(got, [0.75, 0.25])
    k = int(rho.active_facet(np.array([[0.26, 0.25]]))[0])
    assert abs(float(rho.forms[k](np.array([[0.5, 0.5]]))[0])) < 1e-12


def test_retraction_is_undefined_at_the_center() -> None:
    rho = radial_retraction(_triangle(), [0.25, 0.25])
    with pytest.raises(UndefinedAtCenterError):
        rho(np.array([[0.25, 0.25]]))


def test_retraction_center_must_be_interior() -> None:
    with pytest.raises(InvalidInstanceError):
        radial_retraction(_triangle(), [1.0, 1.0])


# instances


def test_unit_instance_forms_and_cells() -> None:
    inst = ApexInstance.unit_triangle_in_square()
    assert inst.n == 2
    assert inst.issues() == []
    assert np.allclose(solve_w(inst), [0.0, math.sqrt(5.0)])
    cells = exterior_cells(inst)
    assert len(cells) == 2
    assert not cells[0].contains(inst.vertices[1:2])[0]


def test_instance_rejects_apex_outside() -> None:
    square = ApexInstance.unit_triangle_in_square().polytope
    with pytest.raises(InvalidInstanceError):
        ApexInstance.from_points(square, [[1.0, 0.0], [2.0, 0.0]], [1.5, 5.0])


def test_instance_rejects_collinear_apex() -> None:
    square = ApexInstance.unit_triangle_in_square().polytope
    with pytest.raises(InvalidInstanceError):
        ApexInstance.from_points(square, [[1.0, 0.0], [2.0, 0.0]], [3.0, 0.0])


def test_dependent_facet_forms_are_infeasible() -> None:
    inst = ApexInstance.unit_triangle_in_square()
    broken = dataclasses.replace(inst, facet_forms=(inst.facet_forms[0], inst.facet_forms[0]))
    with pytest.raises(InfeasibleWError):
        solve_w(broken)


def test_instance_json_roundtrip_keeps_the_forms() -> None:
    inst = ApexInstance.unit_triangle_in_square()
    back = ApexInstance.from_json(inst.to_json())
    x = np.random.default_rng(1).uniform(0.0, 3.0, size=(50, 2))
    assert np.allclose(back.interior.margin(x), inst.interior.margin(x))


def test_shared_interior_point() -> None:
    k = ApexInstance.unit_triangle_in_square().polytope
    q = shared_interior_point(k, k)
    assert q is not None and np.allclose(q, [1.5, 1.5])
    far = ConvexPolytope.from_vertices(k.vertices + np.array([10.0, 0.0]))
    assert shared_interior_point(k, far) is None


# apex paths


def test_unit_paths_data(unit_paths) -> None:
    assert np.allclose(unit_paths.u[0], [0.5, 1.0])
    assert unit_paths.delta == pytest.approx(0.125)
    inst = unit_paths.instance
    want = np.vstack([inst.vertices[0], np.zeros(2), 2.0 * unit_paths.u[0], 6.0 * unit_paths.w])
    assert np.allclose(unit_paths.jet(0, 0.0, 3), want, atol=1e-10)


def test_other_facet_form_is_a_pure_cube_near_zero(unit_paths) -> None:
    inst = unit_paths.instance
    t = np.linspace(-unit_paths.delta, unit_paths.delta, 101)
    vals = inst.facet_forms[1](unit_paths.evaluate(0, t))
    a = path_constants(inst, unit_paths.u, unit_paths.w)["a"][1]
    assert a == pytest.approx(1.0)
    assert np.allclose(vals, -a * t**3, atol=1e-12)


def test_paths_meet_the_apex_at_one(unit_paths) -> None:
    for i in range(2):
        assert np.allclose(unit_paths.evaluate(i, np.array([1.0])), [unit_paths.instance.apex])


def test_sign_conditions_hold(unit_paths) -> None:
    rep = sign_conditions(unit_paths)
    assert rep.passed
    assert rep.details["coefficients_ok"]
    assert rep.details["eps0"] > 0


def test_corner_instance_builds() -> None:
    inst = ApexInstance.from_corner(corner_complex(2, 0), 0)
    paths = build_apex_paths(inst)
    assert sign_conditions(paths).passed
    assert 0 < paths.delta <= 0.125


# cover map


def test_cover_map_ends(unit_cover) -> None:
    inst = unit_cover.instance
    lam = np.random.default_rng(2).dirichlet([1.0, 1.0], size=20)
    assert np.allclose(unit_cover.evaluate(lam, np.zeros(20)), lam @ inst.vertices)
    assert np.allclose(unit_cover.evaluate(lam, np.ones(20)), np.tile(inst.apex, (20, 1)))


def test_cover_map_on_a_vertex_weight_is_the_path(unit_cover, unit_paths) -> None:
    t = np.linspace(-0.1, 1.1, 31)
    lam = np.tile([1.0, 0.0], (t.size, 1))
    assert np.allclose(unit_cover.evaluate(lam, t), unit_paths.evaluate(0, t))


@pytest.mark.parametrize("t0", [0.0, 1.0])
def test_jets_are_linear_in_lambda(unit_cover, unit_paths, t0: float) -> None:
    lam = np.array([0.3, 0.7])
    want = lam[0] * unit_paths.jet(0, t0, 3) + lam[1] * unit_paths.jet(1, t0, 3)
    assert np.max(np.abs(unit_cover.t_jet(lam, t0, 3) - want)) < 1e-10


def test_boundary_degree_is_one(unit_cover) -> None:
    assert boundary_degree(unit_cover) == 1


class _SwappedWeights:
    """The unit cover with lambda_1 and lambda_2 exchanged: same image, reversed boundary."""

    def __init__(self, cover) -> None:
        self.instance = cover.instance
        self._cover = cover

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self._cover(np.asarray(points)[:, [1, 0, 2]])


def test_reversed_boundary_winds_minus_one(unit_cover) -> None:
    flipped = _SwappedWeights(unit_cover)
    assert boundary_degree(flipped) == -1
    rep = degree_report(flipped)
    assert not rep.passed
    assert rep.details == {"degree": -1}
    assert degree_report(unit_cover).passed


def test_boundary_degree_only_in_the_plane() -> None:
    with pytest.raises(DimensionMismatchError):
        boundary_degree(SimpleNamespace(instance=SimpleNamespace(n=3)))


def test_unperturbed_cover_keeps_every_conclusion(unit_cover) -> None:
    reports = cover_conclusions(unit_cover, unit_cover, budget=SMALL)
    assert [r.check for r in reports] == ["coverage", "interior", "boundary_exclusion", "flap_containment"]
    assert all(r.passed for r in reports), [r.to_json() for r in reports if not r.passed]


# robustness


def test_perturbations_keep_anchor_jets(unit_cover) -> None:
    direction = random_directions(unit_cover, count=1, seed=3)[0]
    assert direction.sup_norm() == pytest.approx(1.0, rel=1e-6)
    g = perturbed_cover(unit_cover, direction, 0.5)
    lam = np.array([0.4, 0.6])
    for t0 in (0.0, 1.0):
        assert np.max(np.abs(g.t_jet(lam, t0, 3) - unit_cover.t_jet(lam, t0, 3))) < 1e-10
    assert boundary_degree(perturbed_cover(unit_cover, direction, 1e-3)) == 1


def test_robustness_radius_is_positive_and_finite(unit_cover) -> None:
    result = robustness_radius(unit_cover, directions=2, seed=0, budget=SMALL)
    assert result.tested[0] == (0.0, True)
    assert result.eps_star > 0
    assert result.failure is not None
    assert result.failure["magnitude"] > result.eps_star
    assert result.to_json()["eps0"] == pytest.approx(result.eps0)


def test_robustness_radius_needs_a_failing_magnitude(unit_cover) -> None:
    with pytest.raises(RobustnessError) as info:
        robustness_radius(unit_cover, directions=2, seed=0, start=1e-6, max_magnitude=1e-6, budget=SMALL)
    assert info.value.numeric
    assert info.value.details["tested"] == [[0.0, True], [1e-6, True]]


@pytest.mark.slow
def test_robustness_radius_over_twenty_directions(unit_cover) -> None:
    result = robustness_radius(unit_cover, directions=20, seed=0, budget=SMALL)
    assert result.eps_star > 0
    assert (result.eps_star, True) in result.tested
    dirs = random_directions(unit_cover, count=20, seed=0)

    def kept(magnitude: float) -> list:
        covers = [perturbed_cover(unit_cover, d, magnitude) for d in dirs]
        return [all(r.passed for r in cover_conclusions(g, unit_cover, budget=SMALL)) for g in covers]

    assert all(kept(result.eps_star))
    assert not all(kept(10 * result.eps_star))


# smoothing


def test_smooth_paths_keep_the_jets(unit_paths) -> None:
    smooth = smooth_paths(unit_paths, eps=0.05)
    assert smooth.delta == pytest.approx(0.5 * unit_paths.delta)
    for i in range(2):
        for t0 in (0.0, 1.0):
            assert np.max(np.abs(smooth.jet(i, t0, 3) - unit_paths.jet(i, t0, 3))) < 1e-8
        assert smooth.fits[i].max_deviation < 0.05
    assert boundary_degree(cover_map(smooth)) == 1


def test_smoothed_cover_has_a_formula(unit_paths, unit_cover) -> None:
    with pytest.raises(ValueError):
        unit_cover.as_mapexpr()
    smooth = cover_map(smooth_paths(unit_paths, eps=0.05))
    x = np.column_stack([np.random.default_rng(6).dirichlet([1.0, 1.0], size=40), np.linspace(-0.05, 1.05, 40)])
    assert np.allclose(smooth.as_mapexpr()(x), smooth(x), atol=1e-8)


# fan


def test_default_times_interleave() -> None:
    times = default_times(4)
    flat = [x for ts in times for x in ts]
    assert flat[0] > 0 and flat[-1] < 1
    assert np.all(np.diff(flat) > 0)


def test_polytope_union_margin_is_the_best_member() -> None:
    a = ConvexPolytope.from_vertices([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    b = ConvexPolytope.from_vertices([[2.0, 0.0], [3.0, 0.0], [2.0, 1.0]])
    union = PolytopeUnion((a, b))
    inside = np.array([[0.2, 0.2], [2.2, 0.2]])
    assert np.all(union.margin(inside) > 0)
    assert union.violation(np.array([[1.5, 0.1]]))[0] > 0


def test_fan_needs_connected_instances() -> None:
    inst = ApexInstance.unit_triangle_in_square()
    far_k = ConvexPolytope.from_vertices(inst.polytope.vertices + np.array([10.0, 0.0]))
    far = ApexInstance.from_points(far_k, [[11.0, 0.0], [12.0, 0.0]], [11.5, 1.0])
    with pytest.raises(ConnectivityError):
        fan_cover([inst, far])


def test_fan_rejects_unordered_times() -> None:
    with pytest.raises(ValueError):
        fan_cover([ApexInstance.unit_triangle_in_square()], times=[(0.6, 0.4)])


@pytest.mark.slow
def test_fan_covers_the_diamond() -> None:
    cc = corner_complex(2, 0)
    result = fan_cover(cc, seed=0)
    assert result.passed, [r.to_json() for r in result.reports]
    for res in result.anchor_residuals:
        assert res["base_vertices"] < 1e-6
        assert res["apex"] < 1e-6
        assert res["base_hausdorff"] < 1e-3
    rep = check_coverage(result.map, result.map.domain(), cc.polyhedron, n_targets=200, seed=5, n_domain=20_000)
    assert rep.coverage_gap < 1e-3
    assert result.to_json()["passed"]


@pytest.mark.slow
def test_single_instance_fan_reduces_to_one_sweep() -> None:
    inst = ApexInstance.unit_triangle_in_square()
    result = fan_cover([inst], times=[(0.25, 0.75)], seed=1)
    assert result.passed
    lam = simplex_std(2).vertices
    assert np.allclose(result.map.evaluate(lam, np.full(2, 0.25)), inst.vertices, atol=1e-6)
    x = np.column_stack([np.random.default_rng(7).dirichlet([1.0, 1.0], size=40), np.linspace(0.0, 1.0, 40)])
    assert np.allclose(result.map.as_mapexpr()(x), result.map(x), atol=1e-8)
    bare = fan_cover([inst], times=[(0.25, 0.75)], seed=1, verify=False)
    assert bare.reports == [] and bare.anchor_residuals == []
