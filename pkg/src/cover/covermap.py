from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..models import ConvexPolytope, LinearForm, simplex_std
from ..polycore import MapExpr, compose
from ..polycore import builders as B
from .instance import ApexInstance
from .paths import ApexPaths


def cover_domain(n: int, lo: float = 0.0, hi: float = 1.0) -> ConvexPolytope:
    """Delta_{n-1} x [lo, hi] in R^{n+1}, coordinates (lambda_1..lambda_n, t)."""
    simplex = simplex_std(n)
    verts = np.vstack(
        [np.hstack([simplex.vertices, np.full((n, 1), lo)]), np.hstack([simplex.vertices, np.full((n, 1), hi)])]
    )
    facets = [LinearForm(tuple(f.coefficients) + (0.0,), f.constant) for f in simplex.facets]
    last = np.zeros(n + 1)
    last[-1] = 1.0
    facets.append(LinearForm(tuple(last.tolist()), -lo))
    facets.append(LinearForm(tuple((-last).tolist()), hi))
    equalities = tuple(LinearForm(tuple(e.coefficients) + (0.0,), e.constant) for e in simplex.equalities)
    return ConvexPolytope(verts, tuple(facets), equalities)


@dataclass(frozen=True, eq=False)
class CoverMap:
    """F(lambda, t) = sum_i lambda_i alpha_i(t) on Delta_{n-1} x [-delta, 1 + delta]."""

    paths: ApexPaths

    @property
    def instance(self) -> ApexInstance:
        return self.paths.instance

    @property
    def n(self) -> int:
        return self.paths.instance.n

    @property
    def domain_dim(self) -> int:
        return self.n + 1

    @property
    def codim(self) -> int:
        return self.n

    @property
    def window(self) -> Tuple[float, float]:
        return self.paths.window

    def evaluate(self, lam: np.ndarray, t: np.ndarray) -> np.ndarray:
        lam = np.atleast_2d(np.asarray(lam, dtype=float))
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros((t.size, self.n))
        for i in range(self.n):
            out += lam[:, [i]] * self.paths.evaluate(i, t)
        return out

    def __call__(self, points: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(points, dtype=float))
        return self.evaluate(x[:, : self.n], x[:, self.n])

    def t_jet(self, lam: np.ndarray, t0: float, k: int) -> np.ndarray:
        lam = np.asarray(lam, dtype=float).reshape(-1)
        return sum(lam[i] * self.paths.jet(i, t0, k) for i in range(self.n))

    def domain(self, lo: float = 0.0, hi: float = 1.0) -> ConvexPolytope:
        return cover_domain(self.n, lo, hi)

    def as_mapexpr(self) -> MapExpr:
        """The cover as one formula; only smoothed (single-polynomial) paths have one."""
        if not all(hasattr(p, "to_mapexpr") for p in self.paths.paths):
            raise ValueError("piecewise apex paths have no single formula; smooth them first")
        n = self.n
        t = B.coordinate(n, n + 1)
        terms = [B.multiply(B.coordinate(i, n + 1), compose(p.to_mapexpr(), t)) for i, p in enumerate(self.paths.paths)]
        return B.add(*terms)


def cover_map(paths: ApexPaths) -> CoverMap:
    return CoverMap(paths)
