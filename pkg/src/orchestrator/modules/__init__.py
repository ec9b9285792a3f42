from .demos import DEMOS, CircleDemo, FanDemo, HalfplaneDemo, PrismBallDemo, SimplexCoverDemo, TangentCoverDemo
from .export import ExportStep, read_cloud, write_cloud

__all__ = [
    "DEMOS",
    "CircleDemo",
    "ExportStep",
    "FanDemo",
    "HalfplaneDemo",
    "PrismBallDemo",
    "SimplexCoverDemo",
    "TangentCoverDemo",
    "read_cloud",
    "write_cloud",
]
