"""Expression trees for polynomial and Nash maps.

Maps are evaluated in factored form, on batches of points of shape (N, n), and
on truncated Taylor series for jets. `expand` is only for export and
inspection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, List, Mapping, Sequence, Tuple

import numpy as np

from ..errors import DimensionMismatchError, NonPolynomialError, PoleViolationError
from . import taylor
from .polynomial import Polynomial

KINDS = (
    "coordinate",
    "constant",
    "affine",
    "polynomial",
    "sum",
    "product",
    "scale",
    "compose",
    "power",
    "norm_sq",
    "norm",
    "reciprocal",
    "root",
)
NASH_KINDS = frozenset({"norm", "reciprocal", "root"})

# arguments within this of zero count as poles
POLE_TOL = 1e-300


@dataclass(frozen=True)
class Jet:
    """Derivative values (value, 1st, ..., m-th) of a path at `base_time`."""

    base_time: float
    order: int
    values: np.ndarray  # (order + 1, codim)

    def __post_init__(self) -> None:
        if self.values.shape[0] != self.order + 1:
            raise ValueError("jet needs order + 1 derivative vectors")

    @property
    def codim(self) -> int:
        return int(self.values.shape[1])

    def derivative(self, k: int) -> np.ndarray:
        return self.values[k]

    def truncate(self, m: int) -> "Jet":
        return Jet(self.base_time, m, self.values[: m + 1].copy())

    def residual(self, other: "Jet") -> float:
        m = min(self.order, other.order)
        return float(np.max(np.abs(self.values[: m + 1] - other.values[: m + 1]), initial=0.0))


@dataclass(frozen=True, eq=False)
class MapExpr:
    kind: str
    children: Tuple["MapExpr", ...] = ()
    data: Mapping[str, Any] = field(default_factory=dict)
    domain_dim: int = field(init=False)
    codim: int = field(init=False)
    is_polynomial: bool = field(init=False)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown node kind {self.kind!r}")
        dom, cod = _dims(self)
        object.__setattr__(self, "domain_dim", dom)
        object.__setattr__(self, "codim", cod)
        poly = self.kind not in NASH_KINDS and all(c.is_polynomial for c in self.children)
        object.__setattr__(self, "is_polynomial", poly)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return evaluate(self, points)

    def _eval(self, x: np.ndarray) -> np.ndarray:
        k = self.kind
        d = self.data
        if k == "coordinate":
            return x[:, [d["index"]]]
        if k == "constant":
            return np.broadcast_to(np.asarray(d["value"], dtype=float), (x.shape[0], self.codim)).copy()
        if k == "affine":
            return x @ np.asarray(d["matrix"], dtype=float).T + np.asarray(d["offset"], dtype=float)
        if k == "polynomial":
            return np.column_stack([p.evaluate(x) for p in d["polys"]])
        if k == "sum":
            out = self.children[0]._eval(x)
            for c in self.children[1:]:
                out = out + c._eval(x)
            return out
        if k == "product":
            out = self.children[0]._eval(x)
            for c in self.children[1:]:
                out = out * c._eval(x)
            return np.broadcast_to(out, (x.shape[0], self.codim)).copy()
        if k == "scale":
            return float(d["factor"]) * self.children[0]._eval(x)
        if k == "compose":
            return self.children[0]._eval(self.children[1]._eval(x))
        if k == "power":
            return np.power(self.children[0]._eval(x), int(d["exponent"]))
        y = self.children[0]._eval(x)
        if k == "norm_sq":
            return np.sum(y * y, axis=1, keepdims=True)
        if k == "norm":
            return np.sqrt(np.sum(y * y, axis=1, keepdims=True))
        if k == "reciprocal":
            bad = np.abs(y) <= POLE_TOL
            if np.any(bad):
                raise PoleViolationError("polycore", message="reciprocal argument is zero", details=_witness(x, bad))
            return 1.0 / y
        # root
        p = int(d["p"])
        bad = y <= POLE_TOL
        if np.any(bad):
            raise PoleViolationError("polycore", message=f"{p}-th root argument is not positive", details=_witness(x, bad))
        return np.power(y, 1.0 / p)

    def _taylor(self, s: np.ndarray) -> np.ndarray:
        k = self.kind
        d = self.data
        m = s.shape[-1] - 1
        if k == "coordinate":
            return s[[d["index"]]]
        if k == "constant":
            return taylor.constant(np.asarray(d["value"], dtype=float), m)
        if k == "affine":
            out = np.asarray(d["matrix"], dtype=float) @ s
            out[:, 0] += np.asarray(d["offset"], dtype=float)
            return out
        if k == "polynomial":
            return np.stack([p.evaluate_taylor(s) for p in d["polys"]])
        if k == "sum":
            out = self.children[0]._taylor(s)
            for c in self.children[1:]:
                out = out + c._taylor(s)
            return out
        if k == "product":
            out = self.children[0]._taylor(s)
            for c in self.children[1:]:
                out = taylor.mul(out, c._taylor(s))
            return np.broadcast_to(out, (self.codim, m + 1)).copy()
        if k == "scale":
            return float(d["factor"]) * self.children[0]._taylor(s)
        if k == "compose":
            return self.children[0]._taylor(self.children[1]._taylor(s))
        if k == "power":
            return taylor.power(self.children[0]._taylor(s), int(d["exponent"]))
        y = self.children[0]._taylor(s)
        if k == "norm_sq":
            return np.sum(taylor.mul(y, y), axis=0, keepdims=True)
        if k == "norm":
            return taylor.sqrt(np.sum(taylor.mul(y, y), axis=0, keepdims=True), pole_tol=POLE_TOL)
        if k == "reciprocal":
            return taylor.reciprocal(y, pole_tol=POLE_TOL)
        return taylor.root(y, int(d["p"]), pole_tol=POLE_TOL)


def _witness(x: np.ndarray, bad: np.ndarray) -> Mapping[str, Any]:
    row = int(np.argwhere(bad)[0][0])
    return {"point": [float(v) for v in x[row]]}


def _dims(node: MapExpr) -> Tuple[int, int]:
    k = node.kind
    d = node.data
    ch = node.children
    if k == "coordinate":
        n = int(d["dim"])
        if not 0 <= int(d["index"]) < n:
            raise DimensionMismatchError("polycore", message="coordinate index out of range")
        return n, 1
    if k == "constant":
        return int(d["dim"]), len(d["value"])
    if k == "affine":
        a = np.asarray(d["matrix"], dtype=float)
        if a.ndim != 2 or a.shape[0] != len(d["offset"]):
            raise DimensionMismatchError("polycore", message="affine matrix and offset disagree")
        return int(a.shape[1]), int(a.shape[0])
    if k == "polynomial":
        polys = d["polys"]
        dims = {p.dimension for p in polys}
        if len(dims) != 1:
            raise DimensionMismatchError("polycore", message="polynomial components disagree on dimension")
        return dims.pop(), len(polys)
    if not ch:
        raise ValueError(f"{k} node needs children")
    if k == "compose":
        outer, inner = ch
        if inner.codim != outer.domain_dim:
            raise DimensionMismatchError(
                "polycore",
                message="inner codomain does not match outer domain",
                details={"inner_codim": inner.codim, "outer_domain": outer.domain_dim},
            )
        return inner.domain_dim, outer.codim
    doms = {c.domain_dim for c in ch}
    if len(doms) != 1:
        raise DimensionMismatchError("polycore", message=f"{k} children disagree on domain")
    dom = doms.pop()
    if k == "sum":
        cods = {c.codim for c in ch}
        if len(cods) != 1:
            raise DimensionMismatchError("polycore", message="sum children disagree on codomain")
        return dom, cods.pop()
    if k == "product":
        cods = {c.codim for c in ch} - {1}
        if len(cods) > 1:
            raise DimensionMismatchError("polycore", message="product factors must share codomain or be scalar")
        return dom, cods.pop() if cods else 1
    if k in ("norm_sq", "norm"):
        return dom, 1
    return dom, ch[0].codim


# -- public operations ------------------------------------------------------


def evaluate(map_: MapExpr, points: np.ndarray) -> np.ndarray:
    """Evaluate on one point (shape (n,)) or a batch (shape (N, n))."""
    x = np.asarray(points, dtype=float)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.shape[1] != map_.domain_dim:
        raise DimensionMismatchError(
            "polycore",
            message="point dimension does not match map domain",
            details={"point_dim": int(x.shape[1]), "domain_dim": map_.domain_dim},
        )
    out = map_._eval(x)
    return out[0] if single else out


def compose(outer: MapExpr, inner: MapExpr) -> MapExpr:
    return MapExpr("compose", (outer, inner))


def jet_along(map_: MapExpr, path: MapExpr, t0: float, m: int) -> Jet:
    taylor.check_order(m)
    if path.domain_dim != 1:
        raise DimensionMismatchError("polycore", message="jet path must have a one-dimensional domain")
    if path.codim != map_.domain_dim:
        raise DimensionMismatchError("polycore", message="path codomain does not match map domain")
    s = path._taylor(taylor.variable(float(t0), m)[None, :])
    series = map_._taylor(s)
    return Jet(base_time=float(t0), order=m, values=taylor.derivatives(series).T.copy())


def path_jet(path: MapExpr, t0: float, m: int) -> Jet:
    taylor.check_order(m)
    series = path._taylor(taylor.variable(float(t0), m)[None, :])
    return Jet(base_time=float(t0), order=m, values=taylor.derivatives(series).T.copy())


def expand(map_: MapExpr) -> List[Polynomial]:
    if not map_.is_polynomial:
        raise NonPolynomialError("polycore", message="map contains reciprocal, root or norm nodes")
    return _expand(map_)


def _expand(node: MapExpr) -> List[Polynomial]:
    k = node.kind
    d = node.data
    n = node.domain_dim
    if k == "coordinate":
        return [Polynomial.variable(n, int(d["index"]))]
    if k == "constant":
        return [Polynomial.const(n, float(v)) for v in d["value"]]
    if k == "affine":
        a = np.asarray(d["matrix"], dtype=float)
        out = []
        for i, row in enumerate(a):
            terms = [(_unit(n, j), float(c)) for j, c in enumerate(row)]
            terms.append(((0,) * n, float(d["offset"][i])))
            out.append(Polynomial.from_terms(n, terms))
        return out
    if k == "polynomial":
        return [p.to_monomial() for p in d["polys"]]
    parts = [_expand(c) for c in node.children] if k != "compose" else []
    if k == "sum":
        out = parts[0]
        for other in parts[1:]:
            out = [a + b for a, b in zip(out, other)]
        return out
    if k == "product":
        out = _broadcast(parts[0], node.codim)
        for other in parts[1:]:
            out = [a * b for a, b in zip(out, _broadcast(other, node.codim))]
        return out
    if k == "scale":
        return [p.scale(float(d["factor"])) for p in parts[0]]
    if k == "compose":
        outer = _expand(node.children[0])
        inner = _expand(node.children[1])
        return [p.substitute(inner) for p in outer]
    if k == "power":
        return [p.power(int(d["exponent"])) for p in parts[0]]
    if k == "norm_sq":
        acc = Polynomial.zero(n)
        for p in parts[0]:
            acc = acc + p * p
        return [acc]
    raise NonPolynomialError("polycore", message=f"cannot expand {k} node")


def _unit(n: int, j: int) -> Tuple[int, ...]:
    e = [0] * n
    e[j] = 1
    return tuple(e)


def _broadcast(polys: Sequence[Polynomial], codim: int) -> List[Polynomial]:
    if len(polys) == codim:
        return list(polys)
    return [polys[0]] * codim
