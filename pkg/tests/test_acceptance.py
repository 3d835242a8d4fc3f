"""Exhaustive desk-scale checks over H_3 and H_5 at q = 5."""
import math

import numpy as np
import pytest

from src.algebra.ffield import field_of_order
from src.algebra.polyring import Poly, enumerate_monic, factor
from src.algebra.tables import squarefree_rows
from src.analysis.bounds import a_ell_upper, hasse_envelope, quadratic_zeta_upper, zeta_sigma_upper
from src.analysis.moments import charsum_bound_check, second_moment_exhaustive, square_average_check
from src.analysis.northcott import central_zero_mask, central_zero_search, enumerate_fields, verify_witness
from src.models import EnumerationScope, LPolynomial
from src.zeta.analytic import zeta_eval, zeta_special_value
from src.zeta.curve import make_curve
from src.zeta.lpoly import (
    charsum_lpolys_batch,
    check_weil_package,
    class_number,
    point_count_direct,
    prime_counts_from_lpoly,
    splitting_lpolys_batch,
)

F5 = field_of_order(5)


def _lpolys(g):
    rows = squarefree_rows(F5, 2 * g + 1)
    return rows, splitting_lpolys_batch(F5, g, rows)


@pytest.mark.parametrize("g", [1, pytest.param(2, marks=pytest.mark.slow)])
def test_routes_agree_exhaustively(g):
    rows, split = _lpolys(g)
    assert split.tolist() == charsum_lpolys_batch(F5, g, rows)


@pytest.mark.slow
@pytest.mark.parametrize("g", [1, 2])
def test_direct_point_counts(g):
    rows, split = _lpolys(g)
    for row, coeffs in zip(rows.tolist(), split.tolist()):
        a = prime_counts_from_lpoly(LPolynomial(q=5, genus=g, coeffs=coeffs), 2).a
        curve = make_curve(Poly(F5, tuple(row)))
        assert point_count_direct(curve, 1) == a[1]
        assert point_count_direct(curve, 2) == a[1] + 2 * a[2]


@pytest.mark.parametrize("g", [1, 2])
def test_weil_package_exhaustively(g):
    _, split = _lpolys(g)
    for coeffs in split.tolist():
        L = LPolynomial(q=5, genus=g, coeffs=coeffs)
        report = check_weil_package(L)
        assert report.funceq and report.rh and report.max_root_deviation < 1e-9
        assert class_number(L) >= 1


def test_special_values_at_the_poles_match_the_class_number():
    _, split = _lpolys(2)
    logq = math.log(5)
    for coeffs in split.tolist()[::125]:
        L = LPolynomial(q=5, genus=2, coeffs=coeffs)
        h = class_number(L)
        at0, at1 = zeta_special_value(L, 0), zeta_special_value(L, 1)
        assert at0.order == at1.order == -1
        assert at0.leading.real == pytest.approx(h / ((1 - 5) * logq), rel=1e-12)
        assert at1.leading.real == pytest.approx(h * 5 ** -2 / ((1 - 1 / 5) * logq), rel=1e-12)


@pytest.mark.parametrize("g", [1, 2, pytest.param(3, marks=pytest.mark.slow)])
def test_ensemble_size(g):
    count = sum(1 for _ in enumerate_fields(EnumerationScope(q=5, genus_min=g, genus_max=g)))
    assert count == 5 ** (2 * g + 1) - 5 ** (2 * g)


@pytest.mark.parametrize("g", [1, 2])
def test_inequality_suites(g):
    _, split = _lpolys(g)
    coeffs = split.astype(float)
    k = np.arange(2 * g + 1)
    for radius in (0.05, 0.2, 5 ** -0.5, 0.6, 1.0):
        for theta in np.linspace(0, 2 * math.pi, 7):
            u = radius * complex(math.cos(theta), math.sin(theta))
            values = np.abs(coeffs.astype(complex) @ (u ** k))
            lo, hi = hasse_envelope(5, g, u)
            assert np.all(values >= lo * (1 - 1e-9) - 1e-12)
            assert np.all(values <= hi * (1 + 1e-9))
    for row in split.tolist()[::50]:
        L = LPolynomial(q=5, genus=g, coeffs=row)
        a = prime_counts_from_lpoly(L, 6).a
        assert all(a[ell] <= a_ell_upper(5, g, ell) for ell in range(1, 7))
        for sigma in (1.5, 2, 3):
            assert zeta_eval(L, sigma).real <= zeta_sigma_upper(5, g, sigma)
        for sigma in (1.1, 1.5, 2, 3):
            assert zeta_eval(L, sigma).real <= quadratic_zeta_upper(5, sigma)


@pytest.mark.parametrize("g", [1, 2])
def test_zeta_is_sandwiched_on_vertical_lines(g):
    _, split = _lpolys(g)
    taus = (0.0, 0.3, 1.0, math.pi / math.log(5))
    for coeffs in split.tolist():
        L = LPolynomial(q=5, genus=g, coeffs=coeffs)
        for sigma in (1.1, 1.5, 2, 3):
            top = zeta_eval(L, sigma).real
            assert top > 1
            for t in taus:
                value = abs(zeta_eval(L, complex(sigma, t)))
                assert 1 / top <= value * (1 + 1e-12)
                assert value <= top * (1 + 1e-12)


def test_character_sum_bound_exhaustively():
    for d in range(1, 5):
        for f in enumerate_monic(F5, d):
            if all(m % 2 == 0 for _, m in factor(f).factors):
                continue
            for n in range(d):
                assert charsum_bound_check(f, n).ok


def test_square_average_error_decays():
    T = Poly.from_ints(F5, [0, 1])
    e1 = square_average_check(5, 1, T).error
    e2 = square_average_check(5, 2, T).error
    assert e2 * 5 <= e1


def test_injected_central_zeros_are_detected():
    # (1 - 5u^2)(1 + a u + 5u^2) for every admissible middle coefficient
    rows = [[1, a, 0, -5 * a, -25] for a in range(-4, 5)]
    assert central_zero_mask(5, np.array(rows)).all()


@pytest.mark.slow
def test_central_zero_search_up_to_degree_seven():
    report = central_zero_search(5, 7)
    for witness in report.witnesses:
        assert verify_witness(witness, F5)
    assert report.verified_empty == (not report.witnesses)


@pytest.mark.slow
def test_second_moment_approaches_the_prediction():
    r1 = second_moment_exhaustive(5, 1, 0.5, truncation=12)
    r3 = second_moment_exhaustive(5, 3, 0.5, truncation=12, threads=1)
    r3_parallel = second_moment_exhaustive(5, 3, 0.5, truncation=12, threads=8)
    assert abs(r3.ratio - 1) < abs(r1.ratio - 1)
    assert 0.5 <= r3.ratio <= 2.0
    assert r3.model_dump_json() == r3_parallel.model_dump_json()
