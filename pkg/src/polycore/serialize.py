from __future__ import annotations

import json
from typing import Any, Dict, Mapping

from ..errors import ModuleError, SerializationError
from .mapexpr import KINDS, MapExpr
from .polynomial import Polynomial


def to_json(map_: MapExpr) -> Dict[str, Any]:
    data: Dict[str, Any] = dict(map_.data)
    if map_.kind == "polynomial":
        data = {"polys": [p.to_json() for p in map_.data["polys"]]}
    return {"kind": map_.kind, "children": [to_json(c) for c in map_.children], "data": data}


def from_json(raw: Mapping[str, Any]) -> MapExpr:
    try:
        kind = raw["kind"]
        if kind not in KINDS:
            raise SerializationError("polycore", message=f"unknown node kind {kind!r}")
        children = tuple(from_json(c) for c in raw.get("children", []))
        data = dict(raw.get("data") or {})
        if kind == "polynomial":
            data = {"polys": tuple(Polynomial.from_json(p) for p in data["polys"])}
        return MapExpr(kind, children, data)
    except ModuleError as exc:
        if isinstance(exc, SerializationError):
            raise
        raise SerializationError("polycore", message=str(exc), details={"cause": exc.code})
    except (KeyError, TypeError, ValueError) as exc:
        raise SerializationError("polycore", message=f"malformed map JSON: {exc}")


def dumps(map_: MapExpr) -> str:
    return json.dumps(to_json(map_), separators=(",", ":"))


def loads(text: str) -> MapExpr:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerializationError("polycore", message=f"invalid JSON: {exc}")
    return from_json(raw)
