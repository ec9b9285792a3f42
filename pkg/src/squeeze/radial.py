"""Radial squeeze polynomials x -> h(|x|^2) x.

h(t) = t^a ((R^2 - t)/(R^2 - 1))^e, evaluated in this factored form so that
h(1) = 1 holds exactly. Two exponent rules are provided:

- "flat": a = 2, e = 2(R^2 - 1). h'(1) = 0 and 0 <= h <= 1 on [0, R^2].
- "peak": a = 2, e = 5(R^2 - 1)/2. The radial profile r h(r^2) has its unique
  maximum 1 at r = 1, so g(B(0, R)) is the closed unit ball. e must be an
  integer, so R^2 has to be odd.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np
from scipy.optimize import minimize_scalar

from ..polycore import MapExpr, Polynomial
from ..polycore import builders as B
from ..polycore.mapexpr import compose

logger = logging.getLogger("nash_squeeze.squeeze")

RULES = ("flat", "peak")
PROFILE_TOL = 1e-9
RANGE_TOL = 1e-12
DEFAULT_SAMPLES = 10_000


@dataclass(frozen=True)
class RadialSqueeze:
    r2: int
    a: int
    e: int
    rule: str = "flat"

    def __post_init__(self) -> None:
        if self.r2 < 2:
            raise ValueError("R^2 must be an integer >= 2")
        if self.rule not in RULES:
            raise ValueError(f"unknown exponent rule {self.rule!r}")

    def h(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        u = (self.r2 - t) / (self.r2 - 1)
        return np.power(t, self.a) * np.power(u, self.e)

    def dh(self, t: np.ndarray) -> np.ndarray:
        """h'(t) = t^(a-1) u^(e-1) (a u - e t/(R^2-1))."""
        t = np.asarray(t, dtype=float)
        c = self.r2 - 1
        u = (self.r2 - t) / c
        return np.power(t, self.a - 1) * np.power(u, self.e - 1) * (self.a * u - self.e * t / c)

    def profile(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return r * self.h(r * r)

    @property
    def turning_point(self) -> float:
        """The unique zero of h' in (0, R^2)."""
        return self.a * self.r2 / (self.a + self.e)

    @property
    def outer_radius(self) -> float:
        return float(np.sqrt(self.r2))

    def h_map(self) -> MapExpr:
        """h as a 1 -> 1 MapExpr in factored form."""
        return self._h_of(B.identity(1))

    def _h_of(self, t: MapExpr) -> MapExpr:
        c = float(self.r2 - 1)
        u = compose(B.affine([[-1.0 / c]], [self.r2 / c]), t)
        return B.multiply(B.power(t, self.a), B.power(u, self.e))

    def ball_map(self, d: int) -> MapExpr:
        """g(x) = h(|x|^2) x on R^d."""
        x = B.identity(d)
        return B.multiply(self._h_of(B.norm_sq(x)), x)

    def polynomial(self) -> Polynomial:
        """Expanded monomial h; for export only (coefficients grow like R^(2e))."""
        t = Polynomial.variable(1, 0)
        c = float(self.r2 - 1)
        u = (Polynomial.const(1, float(self.r2)) - t).scale(1.0 / c)
        return t.power(self.a) * u.power(self.e)

    def profile_max(self, samples: int = DEFAULT_SAMPLES) -> float:
        """max of r h(r^2) over [0, R], grid search refined by a bounded scalar search."""
        r = np.linspace(0.0, self.outer_radius, samples)
        vals = self.profile(r)
        k = int(np.argmax(vals))
        lo = r[max(k - 1, 0)]
        hi = r[min(k + 1, samples - 1)]
        best = float(vals[k])
        if hi > lo:
            res = minimize_scalar(lambda s: -float(self.profile(s)), bounds=(lo, hi), method="bounded", options={"xatol": 1e-14})
            best = max(best, -float(res.fun))
        return best

    def derivative_sign_profile(self, samples: int = DEFAULT_SAMPLES) -> Dict[str, Any]:
        """h' > 0 on (0, t*) and h' < 0 on (t*, R^2), sampled away from the zeros."""
        tp = self.turning_point
        edge = 1e-3
        left = np.linspace(edge * tp, tp * (1 - edge), samples)
        right = np.linspace(tp + edge * (self.r2 - tp), self.r2 * (1 - edge), samples)
        dl = self.dh(left)
        dr = self.dh(right)
        return {
            "turning_point": tp,
            "increasing": bool(np.all(dl > 0)),
            "decreasing": bool(np.all(dr < 0)),
            "passed": bool(np.all(dl > 0) and np.all(dr < 0)),
        }

    def invariants(self, samples: int = DEFAULT_SAMPLES) -> Dict[str, Any]:
        c = self.r2 - 1
        t = np.linspace(0.0, float(self.r2), samples)
        ht = self.h(t)
        out: Dict[str, Any] = {
            "h0": float(self.h(0.0)),
            "h_r2": float(self.h(float(self.r2))),
            "h1": float(self.h(1.0)),
            "dh1": float(self.a - self.e / c),
            "h_min": float(ht.min()),
            "h_max": float(ht.max()),
            "profile_max": self.profile_max(samples),
        }
        out["range_ok"] = out["h_min"] >= -RANGE_TOL and out["h_max"] <= 1.0 + RANGE_TOL
        out["profile_ok"] = out["profile_max"] <= 1.0 + PROFILE_TOL
        return out

    def to_json(self) -> Dict[str, Any]:
        return {"r2": self.r2, "a": self.a, "e": self.e, "rule": self.rule}


def radial_poly(r2: int, rule: str = "flat") -> RadialSqueeze:
    """The squeeze polynomial for outer bound R^2.

    With the default rule, h(t) = t^2 (t - R^2)^(2(R^2-1)) / (R^2-1)^(2(R^2-1)).
    """
    r2 = int(r2)
    if r2 < 2:
        raise ValueError("R^2 must be an integer >= 2")
    if rule == "flat":
        return RadialSqueeze(r2, 2, 2 * (r2 - 1), "flat")
    if rule == "peak":
        if (r2 - 1) % 2:
            raise ValueError("the peak rule needs an odd R^2")
        return RadialSqueeze(r2, 2, 5 * (r2 - 1) // 2, "peak")
    raise ValueError(f"unknown exponent rule {rule!r}")
