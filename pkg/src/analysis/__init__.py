"""Region classification, explicit bounds, Northcott sets and moments."""
from src.analysis.bounds import (
    bound_rows,
    classify_point,
    couveignes_count_bound,
    genus_cap,
    moment_threshold_B,
    region_grid,
    right_threshold_B,
    size_bound_S,
)
from src.analysis.moments import (
    approx_funceq_eval,
    c_alpha_euler_product,
    charsum_bound_check,
    predicted_shifted_moment,
    second_moment_exhaustive,
    square_average_check,
)
from src.analysis.northcott import (
    central_zero_search,
    compute_S,
    enumerate_fields,
    verify_witness,
)

__all__ = [
    "bound_rows",
    "classify_point",
    "couveignes_count_bound",
    "genus_cap",
    "moment_threshold_B",
    "region_grid",
    "right_threshold_B",
    "size_bound_S",
    "approx_funceq_eval",
    "c_alpha_euler_product",
    "charsum_bound_check",
    "predicted_shifted_moment",
    "second_moment_exhaustive",
    "square_average_check",
    "central_zero_search",
    "compute_S",
    "enumerate_fields",
    "verify_witness",
]
