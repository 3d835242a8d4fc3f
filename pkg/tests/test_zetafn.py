import math

import numpy as np
import pytest

from src.algebra.literals import parse_poly
from src.algebra.ffield import field_of_order
from src.algebra.polyring import MonicFilter, Poly, enumerate_monic
from src.algebra.tables import squarefree_rows
from src.errors import InvalidCurve, NonPositiveClassNumber, PoleAt
from src.models import LPolynomial
from src.zeta.analytic import (
    base_log_zeta_series,
    base_zeta_finite,
    euler_product_zeta,
    genus0_zeta,
    high_precision_zeta,
    xi_eval,
    zeta_eval,
    zeta_special_value,
)
from src.zeta.curve import make_curve
from src.zeta.lpoly import (
    central_value_is_zero,
    charsum_lpolys_batch,
    check_weil_package,
    class_number,
    curve_record,
    effective_divisor_counts,
    log_l_series,
    lpoly_from_charsum,
    lpoly_from_splitting,
    point_count_direct,
    power_sums,
    prime_counts_from_lpoly,
    prime_counts_via_splitting,
    splitting_lpolys_batch,
)


def test_worked_example(example_curve):
    L = lpoly_from_charsum(example_curve)
    assert L.coeffs == [1, -2, 5]
    assert class_number(L) == 4
    assert lpoly_from_splitting(example_curve).coeffs == [1, -2, 5]
    assert point_count_direct(example_curve, 1) == 4
    record = curve_record(example_curve)
    assert (record.D, record.genus, record.L, record.h) == ("T^3+T", 1, [1, -2, 5], 4)
    assert record.rh_ok and record.funceq_ok and not record.central_zero


def test_curve_validation(f5, f3):
    with pytest.raises(InvalidCurve):
        make_curve(parse_poly("T^2+1", f5))
    with pytest.raises(InvalidCurve):
        make_curve(parse_poly("T^3", f5))
    with pytest.raises(InvalidCurve):
        make_curve(parse_poly("2*T^3+1", f5))
    assert make_curve(parse_poly("T^5+T", f3)).genus == 2


@pytest.mark.parametrize("q,g", [(5, 1), (3, 2), (9, 1)])
def test_three_routes_agree(q, g):
    spec = field_of_order(q)
    rows = squarefree_rows(spec, 2 * g + 1)[:60]
    split = splitting_lpolys_batch(spec, g, rows)
    charsum = charsum_lpolys_batch(spec, g, rows)
    assert split.tolist() == charsum
    for row, coeffs in zip(rows.tolist()[:8], charsum):
        curve = make_curve(Poly(spec, tuple(row)))
        assert lpoly_from_charsum(curve).coeffs == coeffs
        for n in range(1, g + 2):
            # #C(F_{q^n}) = q^n + 1 - sum of n-th powers of the Frobenius roots
            expected = q ** n + 1 - power_sums(LPolynomial(q=q, genus=g, coeffs=coeffs), n)[-1]
            assert point_count_direct(curve, n) == expected


def test_weil_package_over_h3(f5):
    for D in enumerate_monic(f5, 3, MonicFilter.SQUAREFREE):
        L = lpoly_from_charsum(make_curve(D))
        report = check_weil_package(L)
        assert report.funceq and report.rh
        assert all(abs(m - 5 ** -0.5) < 1e-9 for m in report.root_moduli)
        assert class_number(L) == sum(L.coeffs) >= 1


def test_prime_counts_round_trip(example_curve):
    L = lpoly_from_charsum(example_curve)
    assert prime_counts_from_lpoly(L, 4).a == prime_counts_via_splitting(example_curve, 4).a


def test_effective_divisor_counts(example_curve):
    L = lpoly_from_charsum(example_curve)
    b = effective_divisor_counts(L, 5)
    assert b[0] == 1
    assert b[1] == 4  # degree-one places
    assert all(b[n] == 4 * (5 ** n - 1) // 4 for n in range(1, 6))


def test_non_positive_class_number():
    with pytest.raises(NonPositiveClassNumber):
        class_number(LPolynomial(q=5, genus=1, coeffs=[1, -6, 5]))


def test_poles(example_curve):
    L = lpoly_from_charsum(example_curve)
    for s in (0, 1, complex(0, 2 * math.pi / math.log(5))):
        with pytest.raises(PoleAt):
            zeta_eval(L, s)
    with pytest.raises(PoleAt):
        genus0_zeta(5, 1)
    assert base_zeta_finite(5, 2) == pytest.approx(1.25)
    with pytest.raises(PoleAt):
        base_zeta_finite(5, 1)


def test_special_values_at_the_poles(example_curve):
    L = lpoly_from_charsum(example_curve)
    at0 = zeta_special_value(L, 0)
    assert at0.order == -1
    assert at0.leading == pytest.approx(4 / ((1 - 5) * math.log(5)))
    at1 = zeta_special_value(L, 1)
    assert at1.order == -1
    assert at1.leading == pytest.approx((4 / 5) / ((1 - 1 / 5) * math.log(5)))


def test_special_value_at_a_regular_point(example_curve):
    L = lpoly_from_charsum(example_curve)
    s = complex(0.3, 0.7)
    sv = zeta_special_value(L, s)
    assert sv.order == 0 and sv.order_confidence == "exact"
    assert sv.leading == pytest.approx(high_precision_zeta(L, s), rel=1e-12)


def test_central_zero_is_detected_exactly():
    L = LPolynomial(q=5, genus=1, coeffs=[1, 0, -5])
    assert central_value_is_zero(L)
    sv = zeta_special_value(L, 0.5)
    assert sv.order == 1 and sv.order_confidence == "exact"
    assert not central_value_is_zero(LPolynomial(q=5, genus=1, coeffs=[1, -2, 5]))
    square = LPolynomial(q=9, genus=1, coeffs=[1, 0, -9])
    assert central_value_is_zero(square)


def test_functional_equation_of_xi(example_curve):
    L = lpoly_from_charsum(example_curve)
    for s in (complex(0.2, 0.1), complex(2.5, -1.0), complex(-0.7, 0.3)):
        assert xi_eval(L, s) == pytest.approx(xi_eval(L, 1 - s), rel=1e-10)


def test_genus0_field_has_trivial_l(example_curve):
    L0 = LPolynomial(q=5, genus=0, coeffs=[1])
    assert zeta_eval(L0, 2) == pytest.approx(genus0_zeta(5, 2))


def test_euler_product_converges(example_curve):
    L = lpoly_from_charsum(example_curve)
    counts = prime_counts_from_lpoly(L, 14)
    assert euler_product_zeta(counts, 2) == pytest.approx(zeta_eval(L, 2), rel=1e-8)


def test_logarithmic_series(example_curve):
    assert base_log_zeta_series(5, 2.0, 10).ok
    check = log_l_series(example_curve, 2.0, 6)
    assert check.ok
    assert abs(check.value) <= -math.log(1 - 5 ** -1.0)
    with pytest.raises(ValueError):
        log_l_series(example_curve, 1.0, 4)


def test_splitting_batch_shape(f5):
    rows = squarefree_rows(f5, 1)
    out = splitting_lpolys_batch(f5, 0, rows)
    assert out.shape == (5, 1) and np.all(out == 1)
