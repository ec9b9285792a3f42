"""Univariate polynomial paths in the Chebyshev basis, and piecewise paths."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Any, Dict, Mapping, Sequence, Tuple

import numpy as np
from numpy.polynomial import Chebyshev
from numpy.polynomial import Polynomial as PowerSeries
from numpy.polynomial import chebyshev as C

from ..polycore import MapExpr, Polynomial
from ..polycore import builders as B
from ..polycore import taylor
from ..polycore.mapexpr import compose, path_jet

BREAK_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PolynomialPath:
    """t -> sum_j coef[j] T_j(x(t)) with x the affine map of `window` onto [-1, 1]."""

    coef: np.ndarray  # (degree + 1, codim)
    window: Tuple[float, float] = (0.0, 1.0)

    def __post_init__(self) -> None:
        c = np.asarray(self.coef, dtype=float)
        if c.ndim == 1:
            c = c[:, None]
        object.__setattr__(self, "coef", c)
        a, b = self.window
        if not b > a:
            raise ValueError("path window needs a < b")
        object.__setattr__(self, "window", (float(a), float(b)))

    @property
    def degree(self) -> int:
        return int(self.coef.shape[0]) - 1

    @property
    def codim(self) -> int:
        return int(self.coef.shape[1])

    @property
    def scale(self) -> float:
        a, b = self.window
        return 2.0 / (b - a)

    def local(self, t: np.ndarray) -> np.ndarray:
        a, b = self.window
        return (2.0 * np.asarray(t, dtype=float) - a - b) / (b - a)

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return C.chebval(self.local(t), self.coef).T.reshape(t.size, self.codim)

    __call__ = evaluate

    def derivative(self, k: int = 1) -> "PolynomialPath":
        if k == 0:
            return self
        if k > self.degree:
            return PolynomialPath(np.zeros((1, self.codim)), self.window)
        return PolynomialPath(C.chebder(self.coef, k, scl=self.scale, axis=0), self.window)

    def jet(self, t0: float, m: int) -> np.ndarray:
        """(m + 1, codim): value and derivatives 1..m at t0."""
        return np.vstack([self.derivative(k).evaluate(np.array([t0])) for k in range(m + 1)])

    def to_mapexpr(self) -> MapExpr:
        polys = [Polynomial.univariate(self.coef[:, j], basis="chebyshev") for j in range(self.codim)]
        a, b = self.window
        window = B.affine([[2.0 / (b - a)]], [-(a + b) / (b - a)])
        return compose(B.polynomial_map(polys), window)

    def to_json(self) -> Dict[str, Any]:
        return {"coef": self.coef.tolist(), "window": list(self.window), "basis": "chebyshev"}

    @classmethod
    def from_json(cls, raw: Mapping[str, Any]) -> "PolynomialPath":
        lo, hi = raw["window"]
        return cls(np.asarray(raw["coef"], dtype=float), (float(lo), float(hi)))

    @classmethod
    def from_power(cls, coeffs: Sequence[Sequence[float]], window: Tuple[float, float] = (0.0, 1.0)) -> "PolynomialPath":
        """From power-basis coefficients in t: coeffs[k] multiplies t^k."""
        c = np.asarray(coeffs, dtype=float)
        if c.ndim == 1:
            c = c[:, None]
        cols = []
        for j in range(c.shape[1]):
            cheb = PowerSeries(c[:, j]).convert(domain=list(window), kind=Chebyshev)
            col = np.zeros(c.shape[0])
            col[: cheb.coef.size] = cheb.coef
            cols.append(col)
        return cls(np.column_stack(cols), window)

    @classmethod
    def constant(cls, value: Sequence[float], window: Tuple[float, float] = (0.0, 1.0)) -> "PolynomialPath":
        return cls(np.asarray(value, dtype=float)[None, :], window)

    @classmethod
    def segment(cls, start: Sequence[float], end: Sequence[float], window: Tuple[float, float] = (0.0, 1.0)) -> "PolynomialPath":
        """Straight segment from start (at window[0]) to end (at window[1])."""
        p = np.asarray(start, dtype=float)
        q = np.asarray(end, dtype=float)
        return cls(np.vstack([(p + q) / 2.0, (q - p) / 2.0]), window)

    def reparametrized(self, window: Tuple[float, float]) -> "PolynomialPath":
        """Same curve traversed over a new window (Chebyshev coefficients are window-free)."""
        return PolynomialPath(self.coef.copy(), window)


@dataclass(frozen=True, eq=False)
class PiecewisePath:
    """Consecutive polynomial pieces; piece i lives on [breaks[i], breaks[i+1]]."""

    pieces: Tuple[PolynomialPath, ...]

    def __post_init__(self) -> None:
        if not self.pieces:
            raise ValueError("piecewise path needs at least one piece")
        for left, right in zip(self.pieces, self.pieces[1:]):
            if abs(left.window[1] - right.window[0]) > BREAK_TOL:
                raise ValueError("piece windows must be consecutive")
            if left.codim != right.codim:
                raise ValueError("pieces disagree on codimension")

    @property
    def breaks(self) -> np.ndarray:
        return np.array([p.window[0] for p in self.pieces] + [self.pieces[-1].window[1]])

    @property
    def window(self) -> Tuple[float, float]:
        return self.pieces[0].window[0], self.pieces[-1].window[1]

    @property
    def codim(self) -> int:
        return self.pieces[0].codim

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.pieces)

    def piece_index(self, t: np.ndarray) -> np.ndarray:
        inner = self.breaks[1:-1]
        return np.searchsorted(inner, np.asarray(t, dtype=float), side="right")

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        idx = self.piece_index(t)
        out = np.empty((t.size, self.codim))
        for i, piece in enumerate(self.pieces):
            sel = idx == i
            if np.any(sel):
                out[sel] = piece.evaluate(t[sel])
        return out

    __call__ = evaluate

    def is_breakpoint(self, t0: float, tol: float = BREAK_TOL) -> bool:
        return bool(np.any(np.abs(self.breaks[1:-1] - t0) <= tol))

    def piece_at(self, t0: float) -> PolynomialPath:
        return self.pieces[int(self.piece_index(np.array([t0]))[0])]

    def jet(self, t0: float, m: int) -> np.ndarray:
        """Jet of the piece containing t0 (the right-hand piece at a breakpoint)."""
        return self.piece_at(t0).jet(t0, m)

    def polynomial_radius(self, t0: float) -> float:
        """Distance from t0 to the nearest interior breakpoint (inf if none)."""
        inner = self.breaks[1:-1]
        if inner.size == 0:
            return float("inf")
        return float(np.min(np.abs(inner - t0)))

    def junction_residuals(self, m: int) -> np.ndarray:
        """max |left jet - right jet| up to order m at each interior breakpoint."""
        out = []
        for left, right in zip(self.pieces, self.pieces[1:]):
            tb = left.window[1]
            out.append(float(np.max(np.abs(left.jet(tb, m) - right.jet(tb, m)))))
        return np.array(out)

    def to_json(self) -> Dict[str, Any]:
        return {"pieces": [p.to_json() for p in self.pieces]}

    @classmethod
    def from_json(cls, raw: Mapping[str, Any]) -> "PiecewisePath":
        return cls(tuple(PolynomialPath.from_json(p) for p in raw["pieces"]))


@dataclass(frozen=True, eq=False)
class FactoredPath:
    """base(t) + prod_i (t - t_i)^(m+1) * correction(t).

    Jets at the anchors are taken on this factored form with Taylor
    arithmetic, so they equal the base's jets whatever the correction is.
    Dense derivatives use the product rule on the same form; the correction
    may be huge where the vanishing factor is tiny, so the form is never
    multiplied out.
    """

    base: PolynomialPath
    anchors: Tuple[float, ...]
    order: int
    correction: PolynomialPath

    @property
    def window(self) -> Tuple[float, float]:
        return self.base.window

    @property
    def codim(self) -> int:
        return self.base.codim

    @property
    def degree(self) -> int:
        return max(self.base.degree, len(self.anchors) * (self.order + 1) + self.correction.degree)

    def vanishing(self, t: np.ndarray) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.ones_like(t)
        for s in self.anchors:
            out *= (t - s) ** (self.order + 1)
        return out

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return self.base.evaluate(t) + self.vanishing(t)[:, None] * self.correction.evaluate(t)

    __call__ = evaluate

    def vanishing_derivatives(self, t: np.ndarray, k: int) -> np.ndarray:
        """(N, k + 1): derivatives 0..k of prod_i (t - t_i)^(m+1) at each t."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        series = taylor.constant(np.ones(t.size), k)
        for s in self.anchors:
            factor = taylor.constant(t - s, k)
            if k >= 1:
                factor[:, 1] = 1.0
            series = taylor.mul(series, taylor.power(factor, self.order + 1))
        return taylor.derivatives(series)

    def derivative(self, k: int = 1) -> "FactoredDerivative":
        return FactoredDerivative(self, k)

    def to_mapexpr(self) -> MapExpr:
        t = B.identity(1)
        factors = [B.power(B.shift(t, [-s]), self.order + 1) for s in self.anchors]
        return B.add(self.base.to_mapexpr(), B.multiply(B.multiply(*factors), self.correction.to_mapexpr()))

    def jet(self, t0: float, m: int) -> np.ndarray:
        return path_jet(self.to_mapexpr(), t0, m).values

    def to_json(self) -> Dict[str, Any]:
        return {
            "base": self.base.to_json(),
            "anchors": list(self.anchors),
            "order": self.order,
            "correction": self.correction.to_json(),
        }

    @classmethod
    def from_json(cls, raw: Mapping[str, Any]) -> "FactoredPath":
        return cls(
            PolynomialPath.from_json(raw["base"]),
            tuple(float(t) for t in raw["anchors"]),
            int(raw["order"]),
            PolynomialPath.from_json(raw["correction"]),
        )


@dataclass(frozen=True, eq=False)
class FactoredDerivative:
    """k-th derivative of a FactoredPath, evaluated by the Leibniz rule."""

    path: FactoredPath
    k: int

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        p = self.path
        vder = p.vanishing_derivatives(t, self.k)
        out = p.base.derivative(self.k).evaluate(t)
        for j in range(self.k + 1):
            out = out + comb(self.k, j) * vder[:, j, None] * p.correction.derivative(self.k - j).evaluate(t)
        return out

    __call__ = evaluate
