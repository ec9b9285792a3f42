from .chain import (
    P1,
    P2,
    P3,
    HalfspaceChain,
    f_ell,
    f_ell_image_bound,
    fence,
    halfspace_chain,
    inversion,
    norm_flatten,
    puncture_lift,
    sample_fence,
    shear,
    shear_curve,
)
from .separation import SeparationCertificate, separation_poly
from .tangent import tangent_cover, tangent_disc, tangent_projection

__all__ = [
    "HalfspaceChain",
    "P1",
    "P2",
    "P3",
    "SeparationCertificate",
    "f_ell",
    "f_ell_image_bound",
    "fence",
    "halfspace_chain",
    "inversion",
    "norm_flatten",
    "puncture_lift",
    "sample_fence",
    "separation_poly",
    "shear",
    "shear_curve",
    "tangent_cover",
    "tangent_disc",
    "tangent_projection",
]
