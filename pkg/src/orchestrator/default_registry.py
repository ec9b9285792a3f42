from __future__ import annotations

from .modules import DEMOS, ExportStep
from .registry import Registry


def build_default_registry() -> Registry:
    """Every demo step plus the export step that writes reports and clouds."""
    reg = Registry()
    for step_cls in DEMOS.values():
        reg.add(step_cls)
    reg.add(ExportStep)
    return reg
