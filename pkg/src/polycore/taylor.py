"""Truncated Taylor-series arithmetic.

A series is an array whose last axis holds normalized coefficients
c_k = f^(k)(t0) / k!, k = 0..m. Leading axes broadcast, so a vector-valued
series has shape (n, m + 1).
"""

from __future__ import annotations

from math import factorial

import numpy as np

from ..errors import OrderCapError, PoleViolationError

ORDER_CAP = 8


def check_order(m: int) -> None:
    if m < 0 or m > ORDER_CAP:
        raise OrderCapError("polycore", message=f"jet order {m} outside [0, {ORDER_CAP}]", details={"order": m})


def variable(t0: float, m: int) -> np.ndarray:
    """The series of the identity t at t0."""
    s = np.zeros(m + 1)
    s[0] = t0
    if m >= 1:
        s[1] = 1.0
    return s


def constant(value: np.ndarray, m: int) -> np.ndarray:
    value = np.asarray(value, dtype=float)
    out = np.zeros(value.shape + (m + 1,))
    out[..., 0] = value
    return out


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    m = a.shape[-1] - 1
    out = np.zeros(a.shape)
    for k in range(m + 1):
        # sum_{i<=k} a_i b_{k-i}
        out[..., k] = np.sum(a[..., : k + 1] * b[..., k::-1], axis=-1)
    return out


def power(a: np.ndarray, n: int) -> np.ndarray:
    if n < 0:
        raise ValueError("integer power must be non-negative")
    result = constant(np.ones(a.shape[:-1]), a.shape[-1] - 1)
    base = np.asarray(a, dtype=float)
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def reciprocal(a: np.ndarray, pole_tol: float = 0.0) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    a0 = a[..., 0]
    if np.any(np.abs(a0) <= pole_tol):
        raise PoleViolationError("polycore", message="reciprocal of a series with zero constant term")
    m = a.shape[-1] - 1
    out = np.zeros(a.shape)
    out[..., 0] = 1.0 / a0
    for k in range(1, m + 1):
        acc = np.sum(a[..., 1 : k + 1] * out[..., k - 1 :: -1][..., :k], axis=-1)
        out[..., k] = -acc / a0
    return out


def real_power(a: np.ndarray, alpha: float) -> np.ndarray:
    """Series of a**alpha for a series with positive constant term."""
    a = np.asarray(a, dtype=float)
    a0 = a[..., 0]
    m = a.shape[-1] - 1
    out = np.zeros(a.shape)
    out[..., 0] = np.power(a0, alpha)
    for k in range(1, m + 1):
        i = np.arange(1, k + 1)
        weights = (alpha + 1.0) * i - k
        acc = np.sum(weights * a[..., 1 : k + 1] * out[..., k - 1 :: -1][..., :k], axis=-1)
        out[..., k] = acc / (k * a0)
    return out


def root(a: np.ndarray, p: int, pole_tol: float = 0.0) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if np.any(a[..., 0] <= pole_tol):
        raise PoleViolationError("polycore", message=f"{p}-th root of a series with non-positive constant term")
    return real_power(a, 1.0 / p)


def sqrt(a: np.ndarray, pole_tol: float = 0.0) -> np.ndarray:
    return root(a, 2, pole_tol=pole_tol)


def derivatives(series: np.ndarray) -> np.ndarray:
    """Convert normalized coefficients to derivative values k! * c_k."""
    m = series.shape[-1] - 1
    scale = np.array([float(factorial(k)) for k in range(m + 1)])
    return series * scale
