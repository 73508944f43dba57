from .paths import (
    Decoration,
    PathWeight,
    RibbonPath,
    SlidingPath,
    enumerate_ribbon_paths,
    enumerate_sliding_paths,
    is_connected,
    is_connected_decorated,
    path_weight,
    reach,
    unpaired_jump_profiles,
)
from .polynomials import BiPolynomial
from .sums import (
    C_count,
    C_table,
    W_sum,
    Y_sum,
    cumulants_poly,
    decorated_cumulants_poly,
    decorated_moments_poly,
    moments_from_cumulants,
    moments_poly,
)

__all__ = [
    "BiPolynomial",
    "C_count",
    "C_table",
    "Decoration",
    "PathWeight",
    "RibbonPath",
    "SlidingPath",
    "W_sum",
    "Y_sum",
    "cumulants_poly",
    "decorated_cumulants_poly",
    "decorated_moments_poly",
    "enumerate_ribbon_paths",
    "enumerate_sliding_paths",
    "is_connected",
    "is_connected_decorated",
    "moments_from_cumulants",
    "moments_poly",
    "path_weight",
    "reach",
    "unpaired_jump_profiles",
]
