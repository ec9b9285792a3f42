from .radial import RULES, RadialSqueeze, radial_poly
from .sandwich import (
    MAX_ESCALATIONS,
    SandwichCertificate,
    cube_to_ball,
    cylinder_certificate,
    cylinder_to_ball,
    escalate,
    interval_to_ball,
    model_to_ball,
    prism_to_ball,
    sandwich_squeeze,
    simplex_normalization,
    simplex_to_ball,
    squeeze_normalized,
)
from .stereo import arc_cover, ball_double_cover, circle_cover, complex_square, sphere_to_ball, stereographic_inverse

__all__ = [
    "MAX_ESCALATIONS",
    "RULES",
    "RadialSqueeze",
    "SandwichCertificate",
    "arc_cover",
    "ball_double_cover",
    "circle_cover",
    "complex_square",
    "cube_to_ball",
    "cylinder_certificate",
    "cylinder_to_ball",
    "escalate",
    "interval_to_ball",
    "model_to_ball",
    "prism_to_ball",
    "radial_poly",
    "sandwich_squeeze",
    "simplex_normalization",
    "simplex_to_ball",
    "sphere_to_ball",
    "squeeze_normalized",
    "stereographic_inverse",
]
