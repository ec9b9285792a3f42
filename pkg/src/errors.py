from __future__ import annotations

from dataclasses import dataclass
from typing import Any, ClassVar, Mapping, Optional


@dataclass
class ModuleError(Exception):
    """Raised when a construction or check cannot complete its work.

    Every expected failure carries the owning package name, a stable snake_case
    code and JSON-safe details. Subclasses fix the code; `numeric` subclasses
    are mapped to exit code 3 by the CLI.
    """

    module: str
    code: str = "error"
    message: str = ""
    details: Optional[Mapping[str, Any]] = None

    default_code: ClassVar[str] = "error"
    numeric: ClassVar[bool] = False

    def __post_init__(self) -> None:
        if self.code == "error":
            self.code = self.default_code

    def __str__(self) -> str:  # pragma: no cover
        base = f"{self.module}:{self.code}"
        if self.message:
            base += f": {self.message}"
        return base


class PoleViolationError(ModuleError):
    """A reciprocal, root or norm node was evaluated at (or past) its pole."""

    default_code = "pole_violation"


class DimensionMismatchError(ModuleError):
    default_code = "dimension_mismatch"


class NonPolynomialError(ModuleError):
    default_code = "non_polynomial"


class OrderCapError(ModuleError):
    default_code = "order_cap"


class RejectionBudgetError(ModuleError):
    default_code = "rejection_budget"
    numeric = True


class DegeneratePolytopeError(ModuleError):
    default_code = "degenerate_polytope"


class ProfileBoundError(ModuleError):
    """The radial profile r*h(r^2) exceeds 1 even after escalating R^2."""

    default_code = "profile_bound"
    numeric = True


class InvalidInstanceError(ModuleError):
    default_code = "invalid_instance"


class InfeasibleWError(ModuleError):
    default_code = "infeasible_w"


class NoDeltaError(ModuleError):
    default_code = "no_delta"
    numeric = True


class UndefinedAtCenterError(ModuleError):
    default_code = "undefined_at_center"


class IllConditionedError(ModuleError):
    default_code = "ill_conditioned"
    numeric = True


class DegreeCapError(ModuleError):
    default_code = "degree_cap"
    numeric = True


class JetMismatchError(ModuleError):
    default_code = "jet_mismatch"


class NotPolynomialAtAnchorError(ModuleError):
    default_code = "not_polynomial_at_anchor"


class ConnectivityError(ModuleError):
    default_code = "connectivity"


class RobustnessError(ModuleError):
    default_code = "no_robustness_failure"
    numeric = True


class SeparationError(ModuleError):
    default_code = "separation_failure"
    numeric = True


class CenterHitError(ModuleError):
    default_code = "center_hit"


class StepTooLargeError(ModuleError):
    default_code = "step_too_large"


class DegenerateFrameError(ModuleError):
    default_code = "degenerate_frame"


class SerializationError(ModuleError):
    default_code = "serialization"


def is_numeric(exc: BaseException) -> bool:
    return isinstance(exc, ModuleError) and type(exc).numeric
