from .covermap import CoverMap, cover_domain, cover_map
from .degree import boundary_degree, boundary_loop, degree_report
from .fan import FanMap, FanResult, PolytopeUnion, concatenate, default_times, fan_cover
from .instance import ApexInstance, OpenCell, exterior_cells, shared_interior_point
from .paths import ApexPaths, apex_pieces, build_apex_paths, path_constants, sign_conditions, solve_w
from .retraction import RadialRetraction, radial_retraction
from .robustness import (
    CheckBudget,
    Perturbation,
    PerturbedCover,
    RobustnessResult,
    cover_conclusions,
    perturbed_cover,
    random_directions,
    robustness_radius,
)
from .smooth import smooth_paths

__all__ = [
    "ApexInstance",
    "ApexPaths",
    "CheckBudget",
    "CoverMap",
    "FanMap",
    "FanResult",
    "OpenCell",
    "Perturbation",
    "PerturbedCover",
    "PolytopeUnion",
    "RadialRetraction",
    "RobustnessResult",
    "apex_pieces",
    "boundary_degree",
    "boundary_loop",
    "build_apex_paths",
    "concatenate",
    "cover_conclusions",
    "cover_domain",
    "cover_map",
    "default_times",
    "degree_report",
    "exterior_cells",
    "fan_cover",
    "path_constants",
    "perturbed_cover",
    "radial_retraction",
    "random_directions",
    "robustness_radius",
    "shared_interior_point",
    "sign_conditions",
    "smooth_paths",
    "solve_w",
]
