from __future__ import annotations

import numpy as np
import pytest

from src.errors import RejectionBudgetError
from src.models import (
    ConvexPolytope,
    LinearForm,
    ball,
    contains,
    corner_complex,
    model,
    sample,
    set_from_json,
    simplex_std,
    sphere,
)
from src.models.sets import BasicClosedSet, SemialgebraicSet


def test_simplex_solid_facets() -> None:
    s = model("simplex_solid", 2)
    assert contains(s, np.array([0.2, 0.3]), 0.0)
    assert not contains(s, np.array([0.8, 0.3]), 0.0)
    assert len(s.facets) == 3
    assert s.check_representations() == []


@pytest.mark.parametrize("kind", ["hypercube", "cylinder"])
def test_one_dimensional_models_are_the_interval(kind: str) -> None:
    m = model(kind, 1)
    assert contains(m, np.array([1.0]), 0.0)
    assert contains(m, np.array([-1.0]), 0.0)
    assert not contains(m, np.array([1.01]), 0.0)


def test_ball_membership_semantics() -> None:
    b = model("ball", 2)
    assert contains(b, np.array([1.0, 0.0]), 0.0)
    assert not contains(b, np.array([1.1, 0.0]), 0.05)
    assert contains(b, np.array([1.1, 0.0]), 0.25)


def test_ball_samples() -> None:
    pts = sample(model("ball", 2), 1000, seed=3)
    assert pts.shape == (1000, 2)
    assert np.all(np.linalg.norm(pts, axis=1) <= 1.0 + 1e-12)


def test_barycentric_is_reproducible() -> None:
    a = sample(model("simplex_solid", 2), 3, seed=11, mode="barycentric")
    b = sample(model("simplex_solid", 2), 3, seed=11, mode="barycentric")
    assert np.array_equal(a, b)


def test_sphere_boundary_samples() -> None:
    pts = sample(sphere(1), 360, seed=0, mode="boundary")
    assert np.all(np.abs(np.linalg.norm(pts, axis=1) - 1.0) < 1e-12)


@pytest.mark.parametrize("kind", ["simplex_solid", "simplex_std", "hypercube", "prism"])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_polytope_samples_satisfy_facets(kind: str, d: int) -> None:
    if kind == "simplex_std" and d == 1:
        pytest.skip("Delta_0 is a point")
    poly = model(kind, d)
    assert isinstance(poly, ConvexPolytope)
    pts = sample(poly, 1000, seed=d, mode="barycentric")
    assert np.all(poly.contains(pts, 1e-10))
    assert poly.check_representations() == []
    bnd = sample(poly, 200, seed=d, mode="boundary")
    assert np.all(poly.contains(bnd, 1e-10))
    assert np.all(np.min(np.abs(poly.facet_values(bnd)), axis=1) < 1e-9)


def test_simplex_std_equality() -> None:
    s = simplex_std(3)
    assert contains(s, np.array([0.2, 0.3, 0.5]), 1e-12)
    assert not contains(s, np.array([0.2, 0.3, 0.4]), 1e-12)


def test_rejection_budget() -> None:
    thin = SemialgebraicSet(
        2,
        (BasicClosedSet(2, ((LinearForm((1.0, 0.0), 0.0).to_polynomial(), "=0"),)),),
        bbox=((-1.0, -1.0), (1.0, 1.0)),
    )
    with pytest.raises(RejectionBudgetError):
        sample(thin, 10, seed=0)


def test_chebyshev_center_of_cube() -> None:
    center, radius = model("hypercube", 2).chebyshev_center()
    assert np.allclose(center, 0.0, atol=1e-9)
    assert radius == pytest.approx(1.0)


@pytest.mark.parametrize(
    "k, apex",
    [(1, [0.25, 0.0]), (2, [1 / 3, 1 / 3]), (0, [0.0, 0.0])],
)
def test_corner_apex(k: int, apex: list) -> None:
    cc = corner_complex(2, k)
    assert np.allclose(cc.apex, apex)
    for s in cc.top_simplices:
        assert np.any(np.all(np.isclose(s.vertices, cc.apex), axis=1))


def test_corner_zero_has_four_triangles() -> None:
    assert len(corner_complex(2, 0).top_simplices) == 4


@pytest.mark.parametrize("d, k", [(2, 0), (2, 1), (2, 2), (3, 1)])
def test_corner_complex_covers_polyhedron(d: int, k: int) -> None:
    cc = corner_complex(d, k)
    pts = sample(cc.polyhedron, 10_000, seed=5, mode="barycentric")
    assert np.all(cc.locate(pts, 1e-9) >= 0)
    for s in cc.top_simplices:
        inner = sample(s, 2000, seed=6, mode="barycentric")
        assert np.all(cc.polyhedron.contains(inner, 1e-9))


def test_corner_face_condition() -> None:
    cc = corner_complex(2, 1)
    for top, base in zip(cc.top_simplices, cc.bases):
        pts = sample(top, 5000, seed=2, mode="boundary")
        on_boundary = np.min(np.abs(cc.polyhedron.facet_values(pts)), axis=1) < 1e-12
        # every boundary point of the cone simplex on the polyhedron boundary lies on its base
        base_form = LinearForm.through_points(base)
        assert np.all(np.abs(base_form(pts[on_boundary])) < 1e-9)


def test_set_json_round_trip() -> None:
    b = ball(2, radius=2.0)
    again = set_from_json(b.to_json())
    x = np.random.default_rng(0).normal(size=(100, 2))
    assert np.array_equal(b.contains(x), again.contains(x))
    cube = model("hypercube", 3)
    again_cube = set_from_json(cube.to_json())
    assert np.array_equal(cube.contains(3 * x[:, [0, 1, 0]] / 4), again_cube.contains(3 * x[:, [0, 1, 0]] / 4))
