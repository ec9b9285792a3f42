from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from src.errors import DimensionMismatchError, NonPolynomialError, OrderCapError, PoleViolationError, SerializationError
from src.polycore import MapExpr, Polynomial, compose, dumps, evaluate, expand, jet_along, loads, path_jet
from src.polycore import builders as B


def _random_poly_map(rng: np.random.Generator, n_in: int, n_out: int, degree: int) -> MapExpr:
    polys = []
    for _ in range(n_out):
        terms = []
        for _ in range(6):
            exps = rng.integers(0, degree + 1, size=n_in)
            while exps.sum() > degree:
                exps[int(np.argmax(exps))] -= 1
            terms.append((exps.tolist(), float(rng.normal())))
        polys.append(Polynomial.from_terms(n_in, terms))
    return B.polynomial_map(polys)


def _cubic_path(v: np.ndarray, u: np.ndarray, w: np.ndarray) -> MapExpr:
    t = B.coordinate(0, 1)
    return B.add(
        B.constant(v, 1),
        B.multiply(B.power(t, 2), B.constant(u, 1)),
        B.multiply(B.power(t, 3), B.constant(w, 1)),
    )


def test_polynomial_invariants() -> None:
    p = Polynomial.from_terms(2, [((1, 0), 1.0), ((1, 0), -1.0), ((0, 2), 3.0)])
    assert p.terms == (((0, 2), 3.0),)
    with pytest.raises(ValueError):
        Polynomial(2, (((1, 0), 0.0),))
    with pytest.raises(ValueError):
        Polynomial(2, (((1,), 1.0),))


def test_identity_eval() -> None:
    assert np.array_equal(evaluate(B.identity(2), np.array([3.0, 4.0])), np.array([3.0, 4.0]))


def test_binomial_expand() -> None:
    t = B.coordinate(0, 1)
    expr = B.power(B.shift(t, [-8.0]), 2)
    (p,) = expand(expr)
    assert dict(p.terms) == {(0,): 64.0, (1,): -16.0, (2,): 1.0}


def test_affine_expand_is_itself() -> None:
    (p,) = expand(B.linear_form([2.0], -1.0))
    assert dict(p.terms) == {(0,): -1.0, (1,): 2.0}


def test_circle_composition_at_zero() -> None:
    t = B.coordinate(0, 1)
    q = B.reciprocal(B.shift(B.power(t, 2), [1.0]))
    f = B.stack(B.multiply(q, B.scale(2.0, t)), B.multiply(q, B.add(B.constant([1.0], 1), B.scale(-1.0, B.power(t, 2)))))
    x, y = B.coordinate(0, 2), B.coordinate(1, 2)
    square = B.stack(B.add(B.power(x, 2), B.scale(-1.0, B.power(y, 2))), B.scale(2.0, B.multiply(x, y)))
    out = evaluate(compose(square, f), np.array([0.0]))
    assert np.allclose(out, [-1.0, 0.0], atol=1e-15)


def test_compose_dimension_mismatch() -> None:
    with pytest.raises(DimensionMismatchError):
        compose(B.identity(3), B.identity(2))


def test_eval_point_dimension_mismatch() -> None:
    with pytest.raises(DimensionMismatchError):
        evaluate(B.identity(2), np.zeros(3))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_composition_and_expansion_coherence(seed: int) -> None:
    rng = np.random.default_rng(seed)
    g = _random_poly_map(rng, 2, 3, 4)
    f = _random_poly_map(rng, 3, 2, 4)
    fg = compose(f, g)
    x = rng.uniform(-1, 1, size=(100, 2))
    direct = evaluate(f, evaluate(g, x))
    composed = evaluate(fg, x)
    assert np.all(np.abs(direct - composed) < 1e-9 * (1 + np.abs(direct)))
    expanded = np.column_stack([p.evaluate(x) for p in expand(fg)])
    assert np.all(np.abs(expanded - composed) < 1e-9 * (1 + np.abs(composed)))


def test_expand_rejects_nash_nodes() -> None:
    with pytest.raises(NonPolynomialError):
        expand(B.norm(B.identity(2)))


def test_reciprocal_pole() -> None:
    with pytest.raises(PoleViolationError):
        evaluate(B.reciprocal(B.coordinate(0, 1)), np.array([0.0]))


def test_root_pole() -> None:
    with pytest.raises(PoleViolationError):
        evaluate(B.root(B.coordinate(0, 1), 3), np.array([-1.0]))


@pytest.mark.parametrize("x", [1e-310, -1e-305, 5e-324])
def test_near_pole_is_a_pole(x: float) -> None:
    with pytest.raises(PoleViolationError):
        evaluate(B.reciprocal(B.coordinate(0, 1)), np.array([x]))
    with pytest.raises(PoleViolationError):
        jet_along(B.reciprocal(B.identity(1)), B.identity(1), x, 2)


def test_small_but_safe_arguments_evaluate() -> None:
    assert evaluate(B.reciprocal(B.coordinate(0, 1)), np.array([1e-200]))[0] == pytest.approx(1e200)
    assert evaluate(B.root(B.coordinate(0, 1), 2), np.array([1e-200]))[0] == pytest.approx(1e-100)


def test_jet_of_cubic_path() -> None:
    v = np.array([1.0, 2.0])
    u = np.array([0.5, 1.0])
    w = np.array([-1.0, 0.25])
    path = _cubic_path(v, u, w)
    jet = jet_along(B.identity(2), path, 0.0, 3)
    assert np.allclose(jet.values, np.vstack([v, np.zeros(2), 2 * u, 6 * w]))


def test_constant_path_jet() -> None:
    path = B.constant([0.3, -0.2], 1)
    jet = jet_along(B.norm_sq(B.identity(2)), path, 0.7, 2)
    assert np.allclose(jet.values[1:], 0.0)


def test_product_jet() -> None:
    t = B.coordinate(0, 1)
    path = B.stack(t, B.power(t, 2))
    xy = B.multiply(B.coordinate(0, 2), B.coordinate(1, 2))
    jet = jet_along(xy, path, 1.0, 1)
    assert np.allclose(jet.values[:, 0], [1.0, 3.0])


def test_order_cap() -> None:
    with pytest.raises(OrderCapError):
        path_jet(B.coordinate(0, 1), 0.0, 9)


@pytest.mark.parametrize("t0", [0.3, 1.7])
def test_jet_matches_finite_differences(t0: float) -> None:
    t = B.coordinate(0, 1)
    path = B.stack(B.shift(t, [2.0]), B.multiply(t, t), B.power(t, 3))
    f = B.stack(
        B.reciprocal(B.shift(B.norm_sq(B.identity(3)), [1.0])),
        B.norm(B.identity(3)),
        B.root(B.shift(B.coordinate(0, 3), [1.0]), 3),
    )
    jet = jet_along(f, path, t0, 3)
    h = 1e-3

    def val(tt: float) -> np.ndarray:
        return evaluate(f, evaluate(path, np.array([tt])))

    d1 = (val(t0 + h) - val(t0 - h)) / (2 * h)
    d2 = (val(t0 + h) - 2 * val(t0) + val(t0 - h)) / h**2
    d3 = (val(t0 + 2 * h) - 2 * val(t0 + h) + 2 * val(t0 - h) - val(t0 - 2 * h)) / (2 * h**3)
    for k, fd in [(1, d1), (2, d2), (3, d3)]:
        assert np.all(np.abs(jet.values[k] - fd) <= 1e-5 * (1 + np.abs(fd)) + 1e-4 * (k == 3))


def test_chebyshev_basis_matches_monomial() -> None:
    p = Polynomial.univariate([0.5, -1.0, 2.0, 0.0, 3.0], basis="chebyshev")
    m = p.to_monomial()
    x = np.linspace(-1.3, 1.3, 41)[:, None]
    assert np.allclose(p.evaluate(x), m.evaluate(x), atol=1e-12)
    s = np.array([[0.2, 1.0, 0.0]])
    assert np.allclose(p.evaluate_taylor(s), m.evaluate_taylor(s), atol=1e-12)


def test_json_round_trip_is_value_identical(tmp_path: Path) -> None:
    rng = np.random.default_rng(7)
    g = compose(_random_poly_map(rng, 2, 2, 3), B.affine(rng.normal(size=(2, 2)), rng.normal(size=2)))
    expr = B.stack(B.multiply(B.reciprocal(B.shift(B.norm_sq(g), [1.0])), g), B.scale(np.pi, B.norm(g)))
    path = tmp_path / "map.json"
    path.write_text(dumps(expr), encoding="utf-8")
    loaded = loads(path.read_text(encoding="utf-8"))
    x = rng.normal(size=(1000, 2))
    assert np.array_equal(evaluate(expr, x), evaluate(loaded, x))
    assert json.loads(dumps(loaded)) == json.loads(dumps(expr))


def test_bad_json_kind() -> None:
    with pytest.raises(SerializationError):
        loads('{"kind": "spline", "children": [], "data": {}}')
