from __future__ import annotations

from typing import Any, Dict, Iterable, List, Mapping, Type

from .interfaces import RESERVED_KEYS, Step


class Registry:
    """Step classes by name. Demo configs refer to steps by these names."""

    def __init__(self) -> None:
        self._steps: Dict[str, Type[Step]] = {}

    def add(self, step_cls: Type[Step]) -> Type[Step]:
        name = step_cls.name
        if not name:
            raise ValueError(f"{step_cls.__name__} has no step name")
        if name in self._steps:
            raise ValueError(f"step already registered: {name}")
        self._steps[name] = step_cls
        return step_cls

    def names(self) -> List[str]:
        return sorted(self._steps)

    def __contains__(self, name: object) -> bool:
        return name in self._steps

    def options(self, name: str) -> Dict[str, Any]:
        return dict(self._lookup(name).options)

    def create(self, name: str) -> Step:
        return self._lookup(name)()

    def create_many(self, names: Iterable[str]) -> List[Step]:
        return [self.create(n) for n in names]

    def _lookup(self, name: str) -> Type[Step]:
        try:
            return self._steps[name]
        except KeyError as exc:
            raise KeyError(f"unknown step: {name}") from exc

    def problems(self, cfg: Any) -> List[str]:
        """Everything wrong with a demo config, as readable lines (empty when usable)."""
        if not isinstance(cfg, Mapping):
            return ["config is not an object"]
        issues: List[str] = []
        pipeline = cfg.get("pipeline")
        if not isinstance(pipeline, list) or not pipeline or not all(isinstance(x, str) for x in pipeline):
            issues.append("'pipeline' must be a non-empty list of step names")
            pipeline = []
        issues += [f"unknown step {name!r} in pipeline" for name in pipeline if name not in self]
        seed = cfg.get("seed")
        if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
            issues.append(f"seed should be an int, got {seed!r}")
        for key, block in cfg.items():
            if key in RESERVED_KEYS:
                continue
            if key not in self:
                issues.append(f"unknown key {key!r}")
            elif not isinstance(block, Mapping):
                issues.append(f"block {key!r} should be an object")
            else:
                known = self._steps[key].options
                issues += [f"step {key!r} has no option {opt!r}" for opt in sorted(set(block) - set(known))]
        return issues

    def build(self, cfg: Mapping[str, Any]) -> List[Step]:
        issues = self.problems(cfg)
        if issues:
            raise ValueError("; ".join(issues))
        return self.create_many(cfg["pipeline"])
