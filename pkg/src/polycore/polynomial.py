from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np
from numpy.polynomial import chebyshev as C

from . import taylor

Exponent = Tuple[int, ...]
Term = Tuple[Exponent, float]

BASES = ("monomial", "chebyshev")


@dataclass(frozen=True)
class Polynomial:
    """Sparse multivariate polynomial.

    In the `chebyshev` basis an exponent vector (e_1, ..., e_n) stands for the
    product of T_{e_j}(x_j). Terms are kept sorted with unique exponents and no
    zero coefficients; build through `Polynomial.from_terms`.
    """

    dimension: int
    terms: Tuple[Term, ...]
    basis: str = "monomial"

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        if self.basis not in BASES:
            raise ValueError(f"unknown basis {self.basis!r}")
        seen = set()
        for exps, coeff in self.terms:
            if len(exps) != self.dimension:
                raise ValueError(f"exponent {exps} does not match dimension {self.dimension}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            if coeff == 0.0:
                raise ValueError("zero coefficient stored")
            if exps in seen:
                raise ValueError(f"duplicate exponent {exps}")
            seen.add(exps)

    @classmethod
    def from_terms(cls, dimension: int, terms: Iterable[Tuple[Sequence[int], float]], basis: str = "monomial") -> "Polynomial":
        acc: Dict[Exponent, float] = {}
        for exps, coeff in terms:
            key = tuple(int(e) for e in exps)
            acc[key] = acc.get(key, 0.0) + float(coeff)
        kept = tuple(sorted((k, v) for k, v in acc.items() if v != 0.0))
        return cls(dimension=dimension, terms=kept, basis=basis)

    @classmethod
    def zero(cls, dimension: int) -> "Polynomial":
        return cls(dimension=dimension, terms=())

    @classmethod
    def const(cls, dimension: int, value: float) -> "Polynomial":
        return cls.from_terms(dimension, [((0,) * dimension, value)])

    @classmethod
    def variable(cls, dimension: int, index: int) -> "Polynomial":
        exps = [0] * dimension
        exps[index] = 1
        return cls.from_terms(dimension, [(exps, 1.0)])

    @classmethod
    def univariate(cls, coefficients: Sequence[float], basis: str = "monomial") -> "Polynomial":
        """Ascending coefficients c_0 + c_1 t + ... (or c_k T_k in Chebyshev basis)."""
        return cls.from_terms(1, [((k,), c) for k, c in enumerate(coefficients)], basis=basis)

    @property
    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e, _ in self.terms)

    @property
    def max_exponent(self) -> int:
        if not self.terms:
            return 0
        return max(max(e) for e, _ in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _exponent_matrix(self) -> Tuple[np.ndarray, np.ndarray]:
        if not self.terms:
            return np.zeros((0, self.dimension), dtype=int), np.zeros(0)
        exps = np.array([e for e, _ in self.terms], dtype=int)
        coeffs = np.array([c for _, c in self.terms], dtype=float)
        return exps, coeffs

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at points of shape (N, dimension); returns shape (N,)."""
        x = np.asarray(points, dtype=float)
        if x.ndim == 1:
            return self.evaluate(x[None, :])[0]
        if x.shape[1] != self.dimension:
            raise ValueError(f"points have {x.shape[1]} coordinates, polynomial expects {self.dimension}")
        exps, coeffs = self._exponent_matrix()
        if coeffs.size == 0:
            return np.zeros(x.shape[0])
        top = int(exps.max())
        prod = np.ones((x.shape[0], coeffs.size))
        for j in range(self.dimension):
            if self.basis == "chebyshev":
                table = C.chebvander(x[:, j], top)
            else:
                table = np.vander(x[:, j], top + 1, increasing=True)
            prod *= table[:, exps[:, j]]
        return prod @ coeffs

    def evaluate_taylor(self, series: np.ndarray) -> np.ndarray:
        """Evaluate on Taylor series of shape (dimension, m + 1); returns (m + 1,)."""
        s = np.asarray(series, dtype=float)
        m = s.shape[-1] - 1
        exps, coeffs = self._exponent_matrix()
        out = np.zeros(m + 1)
        if coeffs.size == 0:
            return out
        top = int(exps.max())
        tables: List[List[np.ndarray]] = []
        for j in range(self.dimension):
            one = taylor.constant(1.0, m)
            row = [one]
            if top >= 1:
                row.append(s[j])
            for k in range(2, top + 1):
                if self.basis == "chebyshev":
                    row.append(2.0 * taylor.mul(s[j], row[k - 1]) - row[k - 2])
                else:
                    row.append(taylor.mul(s[j], row[k - 1]))
            tables.append(row)
        for e, c in self.terms:
            term = taylor.constant(c, m)
            for j, ej in enumerate(e):
                if ej:
                    term = taylor.mul(term, tables[j][ej])
            out += term
        return out

    def to_monomial(self) -> "Polynomial":
        if self.basis == "monomial":
            return self
        top = self.max_exponent
        # conv[k] = monomial coefficients of T_k
        conv = [C.cheb2poly(np.eye(top + 1)[k]) for k in range(top + 1)]
        acc: Dict[Exponent, float] = {}
        for exps, coeff in self.terms:
            partial: Dict[Exponent, float] = {(): coeff}
            for ej in exps:
                nxt: Dict[Exponent, float] = {}
                for key, val in partial.items():
                    for power, cp in enumerate(conv[ej]):
                        if cp != 0.0:
                            nk = key + (power,)
                            nxt[nk] = nxt.get(nk, 0.0) + val * cp
                partial = nxt
            for key, val in partial.items():
                acc[key] = acc.get(key, 0.0) + val
        return Polynomial.from_terms(self.dimension, acc.items())

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = _same_basis(self, other)
        return Polynomial.from_terms(a.dimension, list(a.terms) + list(b.terms), basis=a.basis)

    def __neg__(self) -> "Polynomial":
        return self.scale(-1.0)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, factor: float) -> "Polynomial":
        return Polynomial.from_terms(self.dimension, [(e, c * factor) for e, c in self.terms], basis=self.basis)

    def shift(self, value: float) -> "Polynomial":
        return self + Polynomial.const(self.dimension, value).with_basis(self.basis)

    def with_basis(self, basis: str) -> "Polynomial":
        if basis == self.basis:
            return self
        if basis == "monomial":
            return self.to_monomial()
        # constants and the zero polynomial read the same in both bases
        if all(sum(e) == 0 for e, _ in self.terms):
            return Polynomial(self.dimension, self.terms, basis=basis)
        raise ValueError("conversion to the Chebyshev basis is only provided for constants")

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        a = self.to_monomial()
        b = other.to_monomial()
        if a.dimension != b.dimension:
            raise ValueError("dimension mismatch in product")
        acc: Dict[Exponent, float] = {}
        for ea, ca in a.terms:
            for eb, cb in b.terms:
                key = tuple(x + y for x, y in zip(ea, eb))
                acc[key] = acc.get(key, 0.0) + ca * cb
        return Polynomial.from_terms(a.dimension, acc.items())

    def power(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.const(self.dimension, 1.0)
        base = self.to_monomial()
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derivative(self, var: int) -> "Polynomial":
        p = self.to_monomial()
        out = []
        for exps, coeff in p.terms:
            if exps[var] == 0:
                continue
            e = list(exps)
            e[var] -= 1
            out.append((e, coeff * exps[var]))
        return Polynomial.from_terms(p.dimension, out)

    def substitute(self, components: Sequence["Polynomial"]) -> "Polynomial":
        """Compose with a polynomial map given by `components` (one per variable)."""
        if len(components) != self.dimension:
            raise ValueError("substitution needs one component per variable")
        p = self.to_monomial()
        inner_dim = components[0].dimension if components else 1
        cache: Dict[Tuple[int, int], Polynomial] = {}

        def pw(j: int, k: int) -> Polynomial:
            key = (j, k)
            if key not in cache:
                cache[key] = Polynomial.const(inner_dim, 1.0) if k == 0 else pw(j, k - 1) * components[j]
            return cache[key]

        result = Polynomial.zero(inner_dim)
        for exps, coeff in p.terms:
            term = Polynomial.const(inner_dim, coeff)
            for j, ej in enumerate(exps):
                if ej:
                    term = term * pw(j, ej)
            result = result + term
        return result

    def coefficients(self) -> np.ndarray:
        """Ascending coefficient array of a univariate polynomial."""
        if self.dimension != 1:
            raise ValueError("coefficients() is univariate only")
        out = np.zeros(self.degree + 1)
        for (e,), c in self.terms:
            out[e] = c
        return out

    def to_json(self) -> Mapping[str, object]:
        return {
            "dimension": self.dimension,
            "basis": self.basis,
            "terms": [[list(e), c] for e, c in self.terms],
        }

    @classmethod
    def from_json(cls, raw: Mapping[str, object]) -> "Polynomial":
        terms = [(tuple(int(x) for x in e), float(c)) for e, c in raw["terms"]]  # type: ignore[union-attr]
        return cls(dimension=int(raw["dimension"]), terms=tuple(terms), basis=str(raw.get("basis", "monomial")))


def _same_basis(a: Polynomial, b: Polynomial) -> Tuple[Polynomial, Polynomial]:
    if a.dimension != b.dimension:
        raise ValueError("dimension mismatch")
    if a.basis == b.basis:
        return a, b
    return a.to_monomial(), b.to_monomial()
