from .approx import (
    ANCHOR_GUARD,
    DEGREE_CAP,
    FitResult,
    approx_fit,
    as_margin,
    check_preconditions,
    guarded_samples,
)
from .hermite import confluent_matrix, hermite_fit, jet_residual
from .jets import JetSpec
from .path import FactoredPath, PiecewisePath, PolynomialPath

__all__ = [
    "ANCHOR_GUARD",
    "DEGREE_CAP",
    "FactoredPath",
    "FitResult",
    "JetSpec",
    "PiecewisePath",
    "PolynomialPath",
    "approx_fit",
    "as_margin",
    "check_preconditions",
    "confluent_matrix",
    "guarded_samples",
    "hermite_fit",
    "jet_residual",
]
