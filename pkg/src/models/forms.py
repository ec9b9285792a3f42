from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space

from ..polycore import Polynomial
from ..polycore import builders as B
from ..polycore.mapexpr import MapExpr


@dataclass(frozen=True)
class LinearForm:
    """h(x) = a . x + b."""

    coefficients: Tuple[float, ...]
    constant: float = 0.0

    @property
    def dimension(self) -> int:
        return len(self.coefficients)

    @property
    def normal(self) -> np.ndarray:
        return np.asarray(self.coefficients, dtype=float)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        x = np.asarray(points, dtype=float)
        return x @ self.normal + self.constant

    def direction(self, vectors: np.ndarray) -> np.ndarray:
        """The linear part h(x) - h(0)."""
        return np.asarray(vectors, dtype=float) @ self.normal

    def normalized(self) -> "LinearForm":
        n = float(np.linalg.norm(self.normal))
        if n == 0.0:
            raise ValueError("cannot normalize a constant form")
        return LinearForm(tuple(float(c) / n for c in self.coefficients), float(self.constant) / n)

    def flipped(self) -> "LinearForm":
        return LinearForm(tuple(-float(c) for c in self.coefficients), -float(self.constant))

    def oriented_towards(self, point: np.ndarray) -> "LinearForm":
        return self if float(self(point)) >= 0.0 else self.flipped()

    def same_hyperplane(self, other: "LinearForm", tol: float = 1e-9) -> bool:
        a = np.append(self.normal, self.constant)
        b = np.append(other.normal, other.constant)
        return bool(np.allclose(a, b, atol=tol))

    def to_polynomial(self) -> Polynomial:
        n = self.dimension
        terms = [((0,) * n, self.constant)]
        for j, c in enumerate(self.coefficients):
            e = [0] * n
            e[j] = 1
            terms.append((e, c))
        return Polynomial.from_terms(n, terms)

    def to_map(self) -> MapExpr:
        return B.linear_form(self.coefficients, self.constant)

    def to_json(self) -> Mapping[str, object]:
        return {"coefficients": list(self.coefficients), "constant": self.constant}

    @classmethod
    def from_json(cls, raw: Mapping[str, object]) -> "LinearForm":
        return cls(tuple(float(c) for c in raw["coefficients"]), float(raw.get("constant", 0.0)))  # type: ignore[union-attr]

    @classmethod
    def through_points(cls, points: Sequence[np.ndarray], positive_at: Optional[np.ndarray] = None) -> "LinearForm":
        """Unit form vanishing on the affine hull of `points` (n points in R^n)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        system = np.hstack([pts, np.ones((pts.shape[0], 1))])
        basis = null_space(system)
        if basis.shape[1] != 1:
            raise ValueError("points do not span a hyperplane")
        coeffs = basis[:-1, 0]
        form = cls(tuple(float(c) for c in coeffs), float(basis[-1, 0])).normalized()
        if positive_at is not None:
            form = form.oriented_towards(positive_at)
        return form
