"""Explicit maps of the squeeze chain onto R^d.

A set that contains the half-tube F = {N1 + N2 |x'|^2 <= x1} is mapped onto
{x1 >= 0} by P1 then P2, and P3 (complex squaring in the first two
coordinates) sends the half-space onto R^d. The other maps straighten a
curve ending at a missing point into that shape: inversion, the
norm-flatten g, the shear h and the involution f_ell.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from ..errors import DimensionMismatchError
from ..models import BasicClosedSet, SemialgebraicSet
from ..polycore import MapExpr, Polynomial
from ..polycore import builders as B
from ..polycore.mapexpr import compose

logger = logging.getLogger("nash_squeeze.unbounded")

FORMULA_TOL = 1e-10


def _tail(d: int) -> MapExpr:
    return B.select(B.identity(d), range(1, d))


def _positive_reciprocal(part: MapExpr) -> MapExpr:
    """1 / y, only defined for y > 0 (the root node raises a pole error otherwise)."""
    return B.power(B.reciprocal(B.root(part, 2)), 2)


def f_ell(ell: int, d: int = 2) -> MapExpr:
    """(x1, x') -> (1 / x1, x' / x1^ell) on {x1 > 0}; an involution there."""
    if ell < 1:
        raise ValueError("ell must be at least 1")
    if d < 2:
        raise DimensionMismatchError("unbounded", message="f_ell needs d >= 2", details={"d": d})
    inv = _positive_reciprocal(B.coordinate(0, d))
    return B.stack(inv, B.multiply(B.power(inv, ell), _tail(d)))


def inversion(d: int, center: Optional[Sequence[float]] = None) -> MapExpr:
    """x -> c + (x - c) / |x - c|^2, the involution of R^d minus the center."""
    x = B.identity(d)
    if center is not None:
        x = B.shift(x, [-float(v) for v in center])
    out = B.multiply(B.reciprocal(B.norm_sq(x)), x)
    return out if center is None else B.shift(out, [float(v) for v in center])


def norm_flatten(d: int) -> MapExpr:
    """(x1, ..., xd) -> (|x|, x2, ..., xd): R^d minus the origin into {x1 > 0}."""
    x = B.identity(d)
    return B.stack(B.root(B.norm_sq(x), 2), _tail(d))


def shear(p: int, alphas: Sequence[Polynomial]) -> MapExpr:
    """(x1, x') -> (x1^(1/p), x_j - alpha_j(x1^(1/p))) on {x1 > 0}."""
    d = len(alphas) + 1
    if p < 1:
        raise ValueError("the exponent p must be at least 1")
    r = B.root(B.coordinate(0, d), p) if p > 1 else B.coordinate(0, d)
    parts = [r]
    for j, alpha in enumerate(alphas, start=1):
        parts.append(B.add(B.coordinate(j, d), B.scale(-1.0, compose(B.polynomial_map([alpha]), r))))
    return B.stack(*parts)


def shear_curve(p: int, alphas: Sequence[Polynomial]) -> MapExpr:
    """t -> (t^p, alpha_2(t), ..., alpha_d(t)); the shear sends it to (t, 0, ..., 0)."""
    first = Polynomial.from_terms(1, [((p,), 1.0)])
    return B.polynomial_map([first] + list(alphas))


def P1(n1: float, n2: float, d: int = 2) -> MapExpr:
    """(x1, x') -> (x1 - (N1 + N2 |x'|^2), x'): maps F onto {x1 >= 0}."""
    terms = [((1,) + (0,) * (d - 1), 1.0), ((0,) * d, -float(n1))]
    for j in range(1, d):
        e = [0] * d
        e[j] = 2
        terms.append((tuple(e), -float(n2)))
    polys = [Polynomial.from_terms(d, terms)] + [Polynomial.variable(d, j) for j in range(1, d)]
    return B.polynomial_map(polys)


def P2(d: int = 2) -> MapExpr:
    """(x1, x') -> (x1^2, x')."""
    first = Polynomial.from_terms(d, [((2,) + (0,) * (d - 1), 1.0)])
    return B.polynomial_map([first] + [Polynomial.variable(d, j) for j in range(1, d)])


def P3(d: int = 2) -> MapExpr:
    """(x1, x2, x'') -> (x1^2 - x2^2, 2 x1 x2, x''): {x1 >= 0} onto R^d."""
    if d < 2:
        raise DimensionMismatchError("unbounded", message="P3 needs d >= 2", details={"d": d})
    zeros = (0,) * (d - 2)
    re = Polynomial.from_terms(d, [((2, 0) + zeros, 1.0), ((0, 2) + zeros, -1.0)])
    im = Polynomial.from_terms(d, [((1, 1) + zeros, 2.0)])
    return B.polynomial_map([re, im] + [Polynomial.variable(d, j) for j in range(2, d)])


def puncture_lift(p: Sequence[float]) -> MapExpr:
    """x -> (x, 1 / |x - p|): a bounded set missing the adherent point p becomes unbounded."""
    c = np.asarray(p, dtype=float)
    x = B.identity(c.size)
    dist = B.root(B.norm_sq(B.shift(x, (-c).tolist())), 2)
    return B.stack(x, B.reciprocal(dist))


def fence(n1: float, n2: float, d: int = 2) -> SemialgebraicSet:
    """F = {N1 + N2 |x'|^2 <= x1}."""
    poly = P1(n1, n2, d).data["polys"][0]
    return SemialgebraicSet(d, (BasicClosedSet(d, ((poly, ">=0"),)),))


def f_ell_image_bound(ell: int, n1: float, n2: float, d: int = 2) -> SemialgebraicSet:
    """{N2 |x'|^2 <= x1^(2 ell - 1) (1 - N1 x1)}, which holds f_ell(F)."""
    lead = (2 * ell - 1,) + (0,) * (d - 1)
    nxt = (2 * ell,) + (0,) * (d - 1)
    terms = [(lead, 1.0), (nxt, -float(n1))]
    for j in range(1, d):
        e = [0] * d
        e[j] = 2
        terms.append((tuple(e), -float(n2)))
    return SemialgebraicSet(d, (BasicClosedSet(d, ((Polynomial.from_terms(d, terms), ">=0"),)),))


def sample_fence(n1: float, n2: float, d: int, n: int, seed: int, spread: float = 5.0, depth: float = 20.0) -> np.ndarray:
    """Points of F: x' uniform in [-spread, spread]^(d-1), x1 above the floor by up to `depth`."""
    rng = np.random.default_rng(seed)
    tail = rng.uniform(-spread, spread, size=(n, d - 1))
    floor = n1 + n2 * np.sum(tail * tail, axis=1)
    x1 = floor + rng.uniform(0.0, depth, size=n)
    return np.column_stack([x1, tail])


# numpy versions of the defining formulas, one per component


def _ref_f_ell(ell: int) -> Callable[[np.ndarray], np.ndarray]:
    return lambda x: np.column_stack([1.0 / x[:, 0], x[:, 1:] / x[:, [0]] ** ell])


def _ref_inversion(x: np.ndarray) -> np.ndarray:
    return x / np.sum(x * x, axis=1, keepdims=True)


def _ref_norm_flatten(x: np.ndarray) -> np.ndarray:
    return np.column_stack([np.linalg.norm(x, axis=1), x[:, 1:]])


def _ref_P1(n1: float, n2: float) -> Callable[[np.ndarray], np.ndarray]:
    return lambda x: np.column_stack([x[:, 0] - (n1 + n2 * np.sum(x[:, 1:] ** 2, axis=1)), x[:, 1:]])


def _ref_P2(x: np.ndarray) -> np.ndarray:
    return np.column_stack([x[:, 0] ** 2, x[:, 1:]])


def _ref_P3(x: np.ndarray) -> np.ndarray:
    return np.column_stack([x[:, 0] ** 2 - x[:, 1] ** 2, 2.0 * x[:, 0] * x[:, 1], x[:, 2:]])


def _ref_shear(p: int, alphas: Sequence[Polynomial]) -> Callable[[np.ndarray], np.ndarray]:
    def ref(x: np.ndarray) -> np.ndarray:
        r = x[:, 0] ** (1.0 / p)
        cols = [r] + [x[:, j] - a.evaluate(r[:, None]) for j, a in enumerate(alphas, start=1)]
        return np.column_stack(cols)

    return ref


@dataclass(frozen=True, eq=False)
class HalfspaceChain:
    """All maps of the chain for fixed ell, N1, N2 in R^d.

    `p` and `alphas` describe the straightened curve t -> (t^p, alpha(t));
    the shear is only present when they are given.
    """

    ell: int
    n1: float
    n2: float
    d: int = 2
    p: Optional[int] = None
    alphas: Tuple[Polynomial, ...] = ()
    components: Dict[str, MapExpr] = field(default_factory=dict)

    def fence(self) -> SemialgebraicSet:
        return fence(self.n1, self.n2, self.d)

    def image_bound(self) -> SemialgebraicSet:
        return f_ell_image_bound(self.ell, self.n1, self.n2, self.d)

    def squeeze(self) -> MapExpr:
        """P3 o P2 o P1: F onto R^d."""
        c = self.components
        return compose(c["P3"], compose(c["P2"], c["P1"]))

    def onto_plane(self) -> MapExpr:
        """P3 o P2 o P1 o f_ell: f_ell(F) onto R^d (f_ell is its own inverse)."""
        return compose(self.squeeze(), self.components["f_ell"])

    def _admissible(self, name: str, n: int, rng: np.random.Generator) -> np.ndarray:
        x = rng.uniform(-3.0, 3.0, size=(n, self.d))
        if name in ("f_ell", "shear"):
            x[:, 0] = rng.uniform(0.1, 10.0, size=n)
        if name in ("inversion", "norm_flatten"):
            x = x[np.linalg.norm(x, axis=1) > 0.1]
        return x

    def references(self) -> Dict[str, Callable[[np.ndarray], np.ndarray]]:
        refs: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
            "f_ell": _ref_f_ell(self.ell),
            "inversion": _ref_inversion,
            "norm_flatten": _ref_norm_flatten,
            "P1": _ref_P1(self.n1, self.n2),
            "P2": _ref_P2,
            "P3": _ref_P3,
        }
        if self.p is not None:
            refs["shear"] = _ref_shear(self.p, self.alphas)
        return refs

    def check(self, n: int = 1000, seed: int = 0) -> Dict[str, float]:
        """Largest relative residual of every component against its formula."""
        rng = np.random.default_rng(seed)
        out = {}
        for name, ref in self.references().items():
            x = self._admissible(name, n, rng)
            got, want = self.components[name](x), ref(x)
            out[name] = float(np.max(np.abs(got - want) / (1.0 + np.abs(want))))
        bad = {k: v for k, v in out.items() if v >= FORMULA_TOL}
        if bad:
            logger.warning("chain components drift from their formulas", extra={"residuals": bad})
        return out


def halfspace_chain(
    ell: int,
    n1: float,
    n2: float,
    d: int = 2,
    p: Optional[int] = None,
    alphas: Sequence[Polynomial] = (),
) -> HalfspaceChain:
    if n1 <= 0 or n2 <= 0:
        raise ValueError("N1 and N2 must be positive")
    if p is not None and len(alphas) != d - 1:
        raise DimensionMismatchError("unbounded", message="need one alpha per coordinate after the first", details={"d": d})
    comps = {
        "f_ell": f_ell(ell, d),
        "inversion": inversion(d),
        "norm_flatten": norm_flatten(d),
        "P1": P1(n1, n2, d),
        "P2": P2(d),
        "P3": P3(d),
    }
    if p is not None:
        comps["shear"] = shear(p, alphas)
    return HalfspaceChain(ell, float(n1), float(n2), d, p, tuple(alphas), comps)
