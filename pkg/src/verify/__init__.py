from .containment import check_containment
from .coverage import check_coverage
from .jets import jet_equal, jet_residual, t_jet
from .parallel import chunked_map, default_threads
from .properties import check_radiality, check_sphere_fixity, check_unit_norm, hausdorff_sampled
from .report import VerificationReport, load_reports, merge_markdown, write_reports
from .signs import eval_path, open_grid, sign_profile
from .winding import accumulated_angle, winding_number

__all__ = [
    "VerificationReport",
    "accumulated_angle",
    "check_containment",
    "check_coverage",
    "check_radiality",
    "check_sphere_fixity",
    "check_unit_norm",
    "chunked_map",
    "default_threads",
    "eval_path",
    "hausdorff_sampled",
    "jet_equal",
    "jet_residual",
    "load_reports",
    "merge_markdown",
    "open_grid",
    "sign_profile",
    "t_jet",
    "winding_number",
    "write_reports",
]
