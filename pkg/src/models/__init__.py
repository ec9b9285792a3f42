from typing import Any, Mapping, Union

from .catalog import KINDS, ball, ball_projection, cylinder, hypercube, interval, model, prism, simplex_solid, simplex_std, sphere
from .corner import CornerComplex, corner_apex, corner_complex
from .forms import LinearForm
from .polytope import ConvexPolytope, simplex_from_vertices, simplex_vertices
from .sampling import sample
from .sets import BasicClosedSet, SemialgebraicSet, contains, semialgebraic_from_json


def set_from_json(raw: Mapping[str, Any]) -> Union[SemialgebraicSet, ConvexPolytope]:
    """Polytope JSON carries "vertices"; everything else is a plain union."""
    if "vertices" in raw:
        return ConvexPolytope.from_json(raw)
    return semialgebraic_from_json(raw)


__all__ = [
    "KINDS",
    "BasicClosedSet",
    "ConvexPolytope",
    "CornerComplex",
    "LinearForm",
    "SemialgebraicSet",
    "ball",
    "ball_projection",
    "contains",
    "corner_apex",
    "corner_complex",
    "cylinder",
    "hypercube",
    "interval",
    "model",
    "prism",
    "sample",
    "set_from_json",
    "simplex_from_vertices",
    "simplex_solid",
    "simplex_std",
    "simplex_vertices",
    "sphere",
]
