from __future__ import annotations

import numpy as np
import pytest

from src.errors import (
    DegreeCapError,
    IllConditionedError,
    InvalidInstanceError,
    JetMismatchError,
    NotPolynomialAtAnchorError,
)
from src.models import ball
from src.pathfit import (
    FactoredPath,
    JetSpec,
    PiecewisePath,
    PolynomialPath,
    approx_fit,
    as_margin,
    guarded_samples,
    hermite_fit,
    jet_residual,
)


def _cubic() -> PolynomialPath:
    # (0.5 t, 0.25 t^2 - 0.2 + 0.1 t^3), well inside the unit disc on [0, 1]
    return PolynomialPath.from_power([[0.0, -0.2], [0.5, 0.0], [0.0, 0.25], [0.0, 0.1]])


def _kinked() -> PiecewisePath:
    return PiecewisePath(
        (
            PolynomialPath.segment([0.0, 0.0], [0.5, 0.0], (0.0, 0.5)),
            PolynomialPath.segment([0.5, 0.0], [0.5, 0.5], (0.5, 1.0)),
        )
    )


def test_single_anchor_order_zero_is_constant() -> None:
    spec = JetSpec((0.3,), (np.array([[1.0, -2.0]]),), 0)
    path = hermite_fit(spec)
    assert path.degree == 0
    assert np.allclose(path.evaluate(np.linspace(0.0, 1.0, 5)), [[1.0, -2.0]] * 5)


def test_two_anchor_first_order_gives_the_line() -> None:
    spec = JetSpec((0.0, 1.0), (np.array([[0.0], [1.0]]), np.array([[1.0], [1.0]])), 1)
    path = hermite_fit(spec)
    t = np.linspace(0.0, 1.0, 11)
    assert np.allclose(path.evaluate(t)[:, 0], t, atol=1e-12)


def test_hermite_recovers_a_cubic() -> None:
    alpha = _cubic()
    spec = JetSpec.from_path(alpha, (0.0, 1.0), 1)
    path = hermite_fit(spec)
    t = np.linspace(0.0, 1.0, 101)
    assert np.max(np.abs(path.evaluate(t) - alpha.evaluate(t))) < 1e-10
    assert jet_residual(path, spec) < 1e-10


def test_close_anchors_are_ill_conditioned() -> None:
    spec = JetSpec((0.5, 0.5 + 1e-12), (np.zeros((4, 1)), np.ones((4, 1))), 3)
    with pytest.raises(IllConditionedError):
        hermite_fit(spec)


@pytest.mark.parametrize(
    "anchors, jets, order",
    [
        ((), (), 1),
        ((0.5, 0.2), (np.zeros((2, 1)), np.zeros((2, 1))), 1),
        ((1.5,), (np.zeros((2, 1)),), 1),
        ((0.5,), (np.zeros((3, 1)),), 1),
    ],
)
def test_jet_spec_validation(anchors: tuple, jets: tuple, order: int) -> None:
    with pytest.raises(ValueError):
        JetSpec(anchors, jets, order)


def test_factored_path_keeps_base_jets() -> None:
    spec = JetSpec.from_path(_cubic(), (0.0, 0.4, 1.0), 2)
    base = hermite_fit(spec)
    correction = PolynomialPath(np.random.default_rng(0).normal(size=(7, 2)))
    beta = FactoredPath(base, spec.anchors, spec.order, correction)
    assert beta.degree == 9 + 6
    for t0 in spec.anchors:
        assert np.allclose(beta.jet(t0, 2), base.jet(t0, 2), atol=1e-12)
    t = np.linspace(0.0, 1.0, 257)
    h = 1e-6
    central = (beta.evaluate(t + h) - beta.evaluate(t - h)) / (2.0 * h)
    assert np.allclose(beta.derivative(1).evaluate(t), central, atol=1e-5)
    assert np.allclose(beta.to_mapexpr()(t[:, None]), beta.evaluate(t), atol=1e-9)


def test_approx_fit_of_a_polynomial_target() -> None:
    alpha = _cubic()
    spec = JetSpec.from_path(alpha, (0.0, 1.0), 1)
    result = approx_fit(alpha, spec, 1e-3, ball(2))
    assert result.max_deviation < 1e-8
    assert result.degree == spec.n_conditions + 4
    assert result.jet_residual < 1e-8
    assert result.min_margin > 0.0
    assert result.to_json()["map"]


@pytest.mark.parametrize("eps", [0.1, 0.05])
def test_looser_tolerance_never_needs_a_higher_degree(eps: float) -> None:
    alpha = _kinked()
    spec = JetSpec.from_path(alpha, (0.0, 1.0), 1)
    tight = approx_fit(alpha, spec, eps, ball(2))
    loose = approx_fit(alpha, spec, 2 * eps, ball(2))
    assert loose.degree <= tight.degree
    assert loose.max_deviation < 2 * eps


def test_approx_fit_smooths_a_kink() -> None:
    alpha = _kinked()
    spec = JetSpec.from_path(alpha, (0.0, 1.0), 1)
    result = approx_fit(alpha, spec, 0.05, ball(2))
    assert result.max_deviation < 0.05
    assert all(d <= 0.05 for d in result.derivative_deviations)
    for t0, want in zip(spec.anchors, spec.jets):
        assert np.allclose(result.path.jet(t0, 1), want, atol=1e-8)


def test_anchor_on_a_breakpoint_is_rejected() -> None:
    alpha = _kinked()
    spec = JetSpec.from_path(alpha, (0.0, 0.5), 1)
    with pytest.raises(NotPolynomialAtAnchorError):
        approx_fit(alpha, spec, 0.05, ball(2))


def test_jets_must_match_the_target() -> None:
    spec = JetSpec.from_path(_kinked(), (0.0, 1.0), 1)
    with pytest.raises(JetMismatchError):
        approx_fit(_cubic(), spec, 0.05, ball(2))


def test_target_outside_the_set_is_invalid() -> None:
    alpha = PolynomialPath.segment([0.0, 0.0], [2.0, 0.0])
    spec = JetSpec.from_path(alpha, (0.0,), 1)
    with pytest.raises(InvalidInstanceError):
        approx_fit(alpha, spec, 0.05, ball(2))


def test_degree_cap() -> None:
    alpha = _kinked()
    spec = JetSpec.from_path(alpha, (0.0, 1.0), 1)
    with pytest.raises(DegreeCapError) as info:
        approx_fit(alpha, spec, 1e-6, ball(2), degree_cap=12)
    assert info.value.details["cap"] == 12


def test_time_aware_margin_and_guard() -> None:
    margin = as_margin(lambda x, t: 1.0 - t)
    assert np.allclose(margin(np.zeros((2, 2)), np.array([0.0, 0.5])), [1.0, 0.5])
    t = guarded_samples((0.0, 1.0), (0.5,), 2000, 0, 1e-2)
    assert np.all(np.abs(t - 0.5) >= 1e-2)
    with pytest.raises(TypeError):
        as_margin(3.0)


def test_piecewise_path_pieces() -> None:
    alpha = _kinked()
    assert np.allclose(alpha.breaks, [0.0, 0.5, 1.0])
    assert np.allclose(alpha.evaluate(np.array([0.25, 0.75])), [[0.25, 0.0], [0.5, 0.25]])
    assert alpha.is_breakpoint(0.5)
    assert not alpha.is_breakpoint(0.25)
    assert alpha.polynomial_radius(0.2) == pytest.approx(0.3)
    # continuous, but the velocity turns by a right angle
    res = alpha.junction_residuals(1)
    assert res[0] == pytest.approx(1.0)
    assert np.allclose(alpha.junction_residuals(0), [0.0])
