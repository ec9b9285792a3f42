"""Small constructors for MapExpr nodes.

Every composite map in the library is assembled from these; `stack` builds a
vector map out of component maps using only sums of embedded pieces, so the
node vocabulary stays fixed.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .mapexpr import MapExpr, compose
from .polynomial import Polynomial


def identity(n: int) -> MapExpr:
    return affine(np.eye(n), np.zeros(n))


def coordinate(index: int, n: int) -> MapExpr:
    return MapExpr("coordinate", data={"index": int(index), "dim": int(n)})


def constant(value: Sequence[float], n: int) -> MapExpr:
    return MapExpr("constant", data={"value": [float(v) for v in value], "dim": int(n)})


def affine(matrix: np.ndarray, offset: Sequence[float]) -> MapExpr:
    a = np.atleast_2d(np.asarray(matrix, dtype=float))
    return MapExpr("affine", data={"matrix": a.tolist(), "offset": [float(v) for v in offset]})


def linear_form(coefficients: Sequence[float], constant_term: float = 0.0) -> MapExpr:
    return affine(np.asarray([list(coefficients)], dtype=float), [constant_term])


def polynomial_map(polys: Sequence[Polynomial]) -> MapExpr:
    return MapExpr("polynomial", data={"polys": tuple(polys)})


def add(*parts: MapExpr) -> MapExpr:
    if len(parts) == 1:
        return parts[0]
    return MapExpr("sum", tuple(parts))


def multiply(*parts: MapExpr) -> MapExpr:
    if len(parts) == 1:
        return parts[0]
    return MapExpr("product", tuple(parts))


def scale(factor: float, part: MapExpr) -> MapExpr:
    return MapExpr("scale", (part,), {"factor": float(factor)})


def power(part: MapExpr, exponent: int) -> MapExpr:
    if exponent < 0:
        raise ValueError("power nodes take non-negative integer exponents")
    return MapExpr("power", (part,), {"exponent": int(exponent)})


def norm_sq(part: MapExpr) -> MapExpr:
    return MapExpr("norm_sq", (part,))


def norm(part: MapExpr) -> MapExpr:
    return MapExpr("norm", (part,))


def reciprocal(part: MapExpr) -> MapExpr:
    return MapExpr("reciprocal", (part,))


def root(part: MapExpr, p: int) -> MapExpr:
    if p < 2:
        raise ValueError("root order must be at least 2")
    return MapExpr("root", (part,), {"p": int(p)})


def shift(part: MapExpr, value: Sequence[float]) -> MapExpr:
    """part + value, as an affine post-composition."""
    k = part.codim
    return compose(affine(np.eye(k), value), part)


def select(part: MapExpr, indices: Sequence[int]) -> MapExpr:
    """Keep the listed output coordinates of `part`."""
    rows = np.zeros((len(indices), part.codim))
    for r, i in enumerate(indices):
        rows[r, i] = 1.0
    return compose(affine(rows, np.zeros(len(indices))), part)


def stack(*parts: MapExpr) -> MapExpr:
    """Concatenate the outputs of maps sharing a domain."""
    if len(parts) == 1:
        return parts[0]
    total = sum(p.codim for p in parts)
    pieces = []
    row = 0
    for p in parts:
        embed = np.zeros((total, p.codim))
        embed[row : row + p.codim, :] = np.eye(p.codim)
        pieces.append(compose(affine(embed, np.zeros(total)), p))
        row += p.codim
    return add(*pieces)
