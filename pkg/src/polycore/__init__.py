from .mapexpr import Jet, MapExpr, compose, evaluate, expand, jet_along, path_jet
from .polynomial import Polynomial
from .serialize import dumps, from_json, loads, to_json
from .taylor import ORDER_CAP

__all__ = [
    "Jet",
    "MapExpr",
    "ORDER_CAP",
    "Polynomial",
    "compose",
    "dumps",
    "evaluate",
    "expand",
    "from_json",
    "jet_along",
    "loads",
    "path_jet",
    "to_json",
]
