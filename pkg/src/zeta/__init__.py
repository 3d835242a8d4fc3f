"""Zeta functions of imaginary hyperelliptic function fields."""
from src.zeta.analytic import (
    euler_product_zeta,
    genus0_zeta,
    xi_eval,
    zeta_eval,
    zeta_special_value,
)
from src.zeta.curve import CurveModel, make_curve
from src.zeta.lpoly import (
    central_value_is_zero,
    check_weil_package,
    class_number,
    effective_divisor_counts,
    lpoly_from_charsum,
    lpoly_from_prime_counts,
    point_count_direct,
    prime_counts_via_splitting,
)

__all__ = [
    "euler_product_zeta",
    "genus0_zeta",
    "xi_eval",
    "zeta_eval",
    "zeta_special_value",
    "CurveModel",
    "make_curve",
    "central_value_is_zero",
    "check_weil_package",
    "class_number",
    "effective_divisor_counts",
    "lpoly_from_charsum",
    "lpoly_from_prime_counts",
    "point_count_direct",
    "prime_counts_via_splitting",
]
