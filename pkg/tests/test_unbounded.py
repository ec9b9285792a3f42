from __future__ import annotations

import numpy as np
import pytest

from src.errors import DegenerateFrameError, DimensionMismatchError, PoleViolationError, SeparationError
from scipy.spatial import cKDTree

from src.models import ConvexPolytope, SemialgebraicSet, ball, sample
from src.polycore import Polynomial
from src.polycore.mapexpr import compose
from src.squeeze import ball_double_cover
from src.unbounded import (
    P1,
    P2,
    P3,
    f_ell,
    f_ell_image_bound,
    fence,
    halfspace_chain,
    inversion,
    norm_flatten,
    puncture_lift,
    sample_fence,
    separation_poly,
    shear,
    shear_curve,
    tangent_cover,
    tangent_disc,
    tangent_projection,
)
from src.verify import check_coverage


def _grid(lo: float, hi: float, n: int) -> np.ndarray:
    g = np.linspace(lo, hi, n)
    return np.array([[a, b] for a in g for b in g])


def test_f2_is_an_involution_at_a_point() -> None:
    f = f_ell(2)
    once = f(np.array([[2.0, 4.0]]))
    assert np.allclose(once, [[0.5, 1.0]])
    assert np.allclose(f(once), [[2.0, 4.0]])


def test_f1_fixes_the_hyperplane() -> None:
    x = np.column_stack([np.ones(5), np.linspace(-2.0, 2.0, 5)])
    assert np.allclose(f_ell(1)(x), x)


@pytest.mark.parametrize("ell", [1, 2, 3])
def test_f_ell_involution_on_samples(ell: int) -> None:
    rng = np.random.default_rng(ell)
    x = np.column_stack([rng.uniform(0.1, 10.0, 1000), rng.uniform(-3.0, 3.0, 1000)])
    f = f_ell(ell)
    assert np.max(np.abs(f(f(x)) - x) / (1.0 + np.abs(x))) < 1e-10


def test_f_ell_has_a_pole_off_the_half_space() -> None:
    with pytest.raises(PoleViolationError):
        f_ell(2)(np.array([[-1.0, 0.5]]))
    with pytest.raises(PoleViolationError):
        f_ell(2)(np.array([[0.0, 0.5]]))


def test_f_ell_image_of_the_fence_obeys_the_bound() -> None:
    ell, n1, n2 = 3, 1.0, 1.0
    x = sample_fence(n1, n2, 2, 1000, seed=4)
    assert np.all(fence(n1, n2).contains(x, 1e-9))
    y = f_ell(ell)(x)
    assert np.all(f_ell_image_bound(ell, n1, n2).contains(y, 1e-12))
    assert np.all(y[:, 1] ** 2 <= y[:, 0] ** (2 * ell - 1) / n2 + 1e-12)


def test_p3_squares_like_complex_numbers() -> None:
    assert np.allclose(P3()(np.array([[1.0, 0.0], [0.0, 1.0]])), [[1.0, 0.0], [-1.0, 0.0]])


def test_p3_needs_two_dimensions() -> None:
    with pytest.raises(DimensionMismatchError):
        P3(1)


def test_p_maps_leave_the_tail_alone() -> None:
    x = np.random.default_rng(0).normal(size=(50, 3))
    assert np.array_equal(P1(2.0, 3.0, 3)(x)[:, 1:], x[:, 1:])
    assert np.array_equal(P2(3)(x)[:, 1:], x[:, 1:])
    assert np.array_equal(P3(3)(x)[:, 2:], x[:, 2:])


def test_p3_covers_a_square_from_the_right_half_plane() -> None:
    right = ConvexPolytope.from_vertices([[0.0, -3.0], [3.0, -3.0], [3.0, 3.0], [0.0, 3.0]])
    targets = _grid(-5.0, 5.0, 15)
    rep = check_coverage(P3(), right, None, targets=targets, n_domain=20_000, refine_steps=40, gap_tol=1e-2)
    assert rep.coverage_gap < 1e-2


def test_chain_covers_a_square_from_the_fence() -> None:
    chain = halfspace_chain(3, 1.0, 1.0)
    x = sample_fence(1.0, 1.0, 2, 2000, seed=1, spread=3.0, depth=12.0)
    assert np.all(chain.components["P1"](x)[:, 0] >= -1e-9)
    # the fence cut down to a box, so it can be sampled
    window = SemialgebraicSet(2, chain.fence().union, bbox=((1.0, -3.0), (12.0, 3.0)))
    rep = check_coverage(chain.squeeze(), window, None, targets=_grid(-5.0, 5.0, 21), n_domain=20_000, refine_steps=40, gap_tol=1e-2)
    assert rep.coverage_gap < 1e-2


def test_chain_components_match_their_formulas() -> None:
    alphas = (Polynomial.univariate([0.0, 0.0, 1.0, -0.5]),)
    chain = halfspace_chain(2, 1.5, 2.0, p=2, alphas=alphas)
    residuals = chain.check(n=1000, seed=0)
    assert set(residuals) == {"f_ell", "inversion", "norm_flatten", "P1", "P2", "P3", "shear"}
    assert max(residuals.values()) < 1e-10


def test_shear_straightens_its_curve() -> None:
    alphas = (Polynomial.univariate([0.0, 0.0, 2.0, 1.0]), Polynomial.univariate([0.0, 0.0, 0.0, -1.0]))
    t = np.linspace(0.01, 1.0, 1000)[:, None]
    got = compose(shear(3, alphas), shear_curve(3, alphas))(t)
    want = np.column_stack([t[:, 0], np.zeros((t.size, 2))])
    assert np.max(np.abs(got - want)) < 1e-10


def test_norm_flatten_value() -> None:
    assert np.allclose(norm_flatten(2)(np.array([[3.0, 4.0]])), [[5.0, 4.0]])
    with pytest.raises(PoleViolationError):
        norm_flatten(2)(np.zeros((1, 2)))


def test_inversion_is_an_involution() -> None:
    x = np.random.default_rng(7).normal(size=(1000, 3))
    x = x[np.linalg.norm(x, axis=1) > 0.05]
    inv = inversion(3)
    assert np.max(np.abs(inv(inv(x)) - x)) < 1e-9
    shifted = inversion(2, center=[1.0, 1.0])
    assert np.allclose(shifted(np.array([[2.0, 1.0]])), [[2.0, 1.0]])


def test_puncture_lift_blows_up_near_the_point() -> None:
    lift = puncture_lift([0.5, 0.5])
    y = lift(np.array([[0.5, 0.5 + 1e-3], [1.5, 0.5]]))
    assert np.allclose(y[:, :2], [[0.5, 0.5 + 1e-3], [1.5, 0.5]])
    assert y[0, 2] == pytest.approx(1e3)
    assert y[1, 2] == pytest.approx(1.0)
    with pytest.raises(PoleViolationError):
        lift(np.array([[0.5, 0.5]]))


# tangent cover


def test_trivial_tangent_cover_is_the_ball_double_cover() -> None:
    g = tangent_cover(2, 2, [0.0, 0.0], np.eye(2), 1.0)
    x = np.random.default_rng(0).normal(size=(100, 2))
    assert np.allclose(g(x), ball_double_cover(2)(x))


def test_tangent_cover_ignores_the_normal_direction() -> None:
    frame = [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8]]
    p = [0.2, -0.1, 0.4]
    g = tangent_cover(3, 2, p, frame, 0.5)
    x = np.random.default_rng(1).normal(size=(200, 3))
    proj = tangent_projection(p, frame)
    assert np.allclose(g(proj(x)), g(x), atol=1e-12)
    assert np.allclose(proj(proj(x)), proj(x), atol=1e-12)


def test_tangent_disc_covers_the_closed_ball() -> None:
    frame = [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8]]
    p = [0.2, -0.1, 0.4]
    g = tangent_cover(3, 2, p, frame, 0.5)
    disc = tangent_disc(p, frame, 0.5, 20_000, seed=2)
    img = g(disc)
    assert np.max(np.linalg.norm(img, axis=1)) <= 1.0 + 1e-12
    dist = cKDTree(img).query(sample(ball(2), 300, 3))[0]
    assert np.max(dist) < 5e-2


def test_tangent_cover_rejects_a_skew_frame() -> None:
    with pytest.raises(DegenerateFrameError):
        tangent_cover(3, 2, [0.0, 0.0, 0.0], [[1.0, 0.0, 0.0], [1.0, 1.0, 0.0]], 1.0)


# separation


def _ring(n: int, seed: int, lo: float = 1.0, hi: float = 5.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    r = rng.uniform(lo, hi, n)
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def test_point_is_separated_from_the_outside_of_the_disc() -> None:
    s2 = _ring(10_000, 0)
    cert = separation_poly(np.zeros((1, 2)), s2)
    assert cert(np.zeros((1, 2)))[0] < 0
    assert np.all(cert(s2) > 0)
    assert cert.s1_margin < 0 < cert.s2_margin
    assert cert.k * 2 > cert.meta["degree"]


def test_swapped_sets_give_a_valid_separation() -> None:
    s1 = sample(ball(2, 0.3), 2000, 5)
    s2 = _ring(2000, 6, 1.0, 2.0)
    cert = separation_poly(s2, s1)
    assert np.all(cert(s2) < 0)
    assert np.all(cert(s1) > 0)


def test_disjoint_boxes_reproduce_their_margins() -> None:
    rng = np.random.default_rng(8)
    box1 = rng.uniform(0.0, 1.0, size=(3000, 2))
    box2 = rng.uniform(0.0, 1.0, size=(3000, 2)) + np.array([2.0, 0.0])
    a = separation_poly(box1, box2, seed=0)
    assert np.all(a(box1) < 0) and np.all(a(box2) > 0)
    assert np.allclose(a.poly().evaluate(box1[:20]), a(box1[:20]), rtol=1e-6, atol=1e-9)
    b = separation_poly(box1, box2, seed=1)
    assert b.meta["degree"] == a.meta["degree"]


def test_separation_margins_hold_on_fresh_box_samples() -> None:
    rng = np.random.default_rng(8)
    shift = np.array([2.0, 0.0])
    cert = separation_poly(rng.uniform(0.0, 1.0, size=(10_000, 2)), rng.uniform(0.0, 1.0, size=(10_000, 2)) + shift, seed=0)
    fresh = np.random.default_rng(9)
    s1 = float(np.max(cert(fresh.uniform(0.0, 1.0, size=(10_000, 2)))))
    s2 = float(np.min(cert(fresh.uniform(0.0, 1.0, size=(10_000, 2)) + shift)))
    assert s1 < 0 < s2
    assert s1 == pytest.approx(cert.s1_margin, rel=0.1)
    assert s2 == pytest.approx(cert.s2_margin, rel=0.1)


def test_touching_samples_cannot_be_separated() -> None:
    pts = np.array([[0.0, 0.0], [1.0, 0.0]])
    with pytest.raises(SeparationError):
        separation_poly(pts, pts[:1])
