import cmath
import math

import mpmath
import pytest

from src.algebra.polyring import MonicFilter, divisor_count, enumerate_monic, irreducible_count
from src.analysis.moments import (
    ShiftSet,
    approx_funceq_eval,
    c_alpha_euler_product,
    charsum_bound_check,
    predicted_shifted_moment,
    second_moment_exhaustive,
    square_average_check,
    tau,
)
from src.errors import DegreeOutOfRange, DivergentParameter, NonMonic, TrivialCharacter, WrongCongruence
from src.zeta.curve import make_curve
from src.zeta.lpoly import lpoly_from_charsum


def test_tau_without_shifts_counts_divisors(f5):
    C = ShiftSet(0, 0)
    for f in enumerate_monic(f5, 3):
        assert tau(C, f) == pytest.approx(divisor_count(f))


def test_tau_is_multiplicative_and_real_for_conjugate_shifts(poly5):
    C = ShiftSet.conjugate_pair(0.2 + 0.7j)
    f, g = poly5("T^2+2"), poly5("T^3+T+1")
    assert tau(C, f * g) == pytest.approx(tau(C, f) * tau(C, g))
    for h in (f, g, f * f, poly5("T^4")):
        assert abs(tau(C, h).imag) < 1e-12


def test_tau_needs_a_monic_argument(poly5):
    with pytest.raises(NonMonic):
        tau(ShiftSet(0.1, 0.1), poly5("3*T+1"))


@pytest.mark.parametrize("alpha", [0.1, 0.25 + 0.3j, 0.45])
def test_finite_functional_equation_over_h3(f5, alpha):
    for D in enumerate_monic(f5, 3, MonicFilter.SQUAREFREE):
        result = approx_funceq_eval(make_curve(D), alpha)
        assert result.ok, (str(D), result)


def test_c_alpha_converges_within_its_tail_bound():
    coarse = c_alpha_euler_product(5, 0.3, truncation=6)
    fine = c_alpha_euler_product(5, 0.3, truncation=14)
    assert coarse.truncation_deg == 6
    assert abs(math.log(fine.value) - math.log(coarse.value)) <= coarse.tail_bound
    assert "first omitted degree 7" in coarse.tail_note


def test_c_alpha_domain():
    with pytest.raises(DivergentParameter):
        c_alpha_euler_product(5, 0)
    with pytest.raises(DivergentParameter):
        c_alpha_euler_product(5, -0.2)
    with pytest.raises(ValueError):
        c_alpha_euler_product(5, 0.3, truncation=0)


def test_prediction_is_real_for_a_conjugate_pair():
    alpha = 0.2 + 0.4j
    value = predicted_shifted_moment(5, 2, alpha, alpha.conjugate(), truncation=8)
    assert abs(value.imag) <= 1e-9 * abs(value)
    with pytest.raises(DivergentParameter):
        predicted_shifted_moment(5, 2, 0.6, 0.1)
    with pytest.raises(DivergentParameter):
        predicted_shifted_moment(5, 2, 0, 0.1)


def _prediction_by_terms(q, g, alpha1, alpha2, truncation):
    """The four-subset sum evaluated term by term in mpmath, tau series summed out to working precision."""
    with mpmath.workdps(40):
        q = mpmath.mpf(q)
        shifts = (mpmath.mpc(alpha1), mpmath.mpc(alpha2))
        eps = mpmath.mpf(10) ** -38

        def zeta_q(x):
            return 1 / (1 - q ** (-x))

        def a_c(g1, g2):
            value = mpmath.mpf(1)
            for d in range(1, truncation + 1):
                size = q ** d
                a, b = size ** -g1, size ** -g2
                series, ell = mpmath.mpc(0), 1
                while True:
                    m = 2 * ell
                    term = sum(a ** j * b ** (m - j) for j in range(m + 1)) / size ** ell
                    series += term
                    if abs(term) < eps:
                        break
                    ell += 1
                local = 1 + series / (1 + 1 / size)
                for gi, gj in ((g1, g1), (g1, g2), (g2, g2)):
                    local *= 1 - size ** (-1 - gi - gj)
                value *= local ** irreducible_count(int(q), d)
            return value

        total = mpmath.mpc(0)
        for flip1 in (False, True):
            for flip2 in (False, True):
                g1 = -shifts[0] if flip1 else shifts[0]
                g2 = -shifts[1] if flip2 else shifts[1]
                flipped = (shifts[0] if flip1 else 0) + (shifts[1] if flip2 else 0)
                total += q ** (-2 * g * flipped) * a_c(g1, g2) * zeta_q(2 * g1) * zeta_q(g1 + g2) * zeta_q(2 * g2)
        return complex(total)


def test_prediction_matches_a_term_by_term_evaluation():
    alpha1, alpha2 = 0.2 + 0.1j, 0.35
    expected = _prediction_by_terms(5, 2, alpha1, alpha2, 5)
    assert predicted_shifted_moment(5, 2, alpha1, alpha2, truncation=5) == pytest.approx(expected, rel=1e-9)


def test_prediction_is_symmetric_in_the_shifts():
    one = predicted_shifted_moment(5, 2, 0.2 + 0.1j, 0.35, truncation=6)
    other = predicted_shifted_moment(5, 2, 0.35, 0.2 + 0.1j, truncation=6)
    assert one == pytest.approx(other, rel=1e-12)


@pytest.mark.parametrize("alpha2", [0.3, -0.3])
def test_prediction_at_equal_real_shifts_is_a_finite_limit(alpha2):
    value = predicted_shifted_moment(5, 2, 0.3, alpha2, truncation=5)
    assert cmath.isfinite(value)
    assert abs(value.imag) <= 1e-9 * abs(value)
    # off the pole by 1e-12 the cancellation in mpmath leaves ~28 digits
    expected = _prediction_by_terms(5, 2, 0.3, mpmath.mpf(alpha2) + mpmath.mpf("1e-12"), 5)
    assert value == pytest.approx(expected, rel=1e-7)
    nearby = predicted_shifted_moment(5, 2, 0.3, alpha2 + 1e-4, truncation=5)
    assert nearby == pytest.approx(value, rel=1e-2)


def test_second_moment_matches_per_curve_values(f5):
    alpha = 0.3 + 0.1j
    report = second_moment_exhaustive(5, 1, alpha, truncation=8)
    u = cmath.exp(-(0.5 + alpha) * math.log(5))
    values = [abs(lpoly_from_charsum(make_curve(D))(u)) ** 2 for D in enumerate_monic(f5, 3, MonicFilter.SQUAREFREE)]
    assert report.curves == 100
    assert report.empirical == pytest.approx(sum(values) / len(values), rel=1e-12)
    assert report.ratio == pytest.approx(report.empirical / report.predicted)
    assert report.error_scale is None


def test_second_moment_is_thread_invariant():
    one = second_moment_exhaustive(5, 2, 0.25, truncation=6, threads=1)
    three = second_moment_exhaustive(5, 2, 0.25, truncation=6, threads=3)
    assert one.curves == 2500
    assert one.empirical == three.empirical


def test_second_moment_guards():
    with pytest.raises(WrongCongruence):
        second_moment_exhaustive(3, 1, 0.25)
    with pytest.raises(DivergentParameter):
        second_moment_exhaustive(5, 1, -0.25)


def test_error_scale_reported_at_large_shift():
    report = second_moment_exhaustive(5, 1, 0.5, truncation=6)
    assert report.error_scale == pytest.approx(5 ** -0.5 + 4 * 5 ** -1)
    assert "convergence to the main term is not asserted" in report.tail_flag


def test_square_average(poly5):
    check = square_average_check(5, 1, poly5("T"))
    assert check.empirical == pytest.approx(0.84)
    assert check.main_term == pytest.approx(5 / 6)
    assert check.error == pytest.approx(5 ** -2 / 6)
    assert check.ok


def test_character_sum_bound(poly5):
    f = poly5("T^3+T")
    assert charsum_bound_check(f, 0).lhs == 1
    for n in (1, 2):
        assert charsum_bound_check(f, n).ok
    with pytest.raises(TrivialCharacter):
        charsum_bound_check(poly5("T^2+2*T+1"), 1)
    with pytest.raises(DegreeOutOfRange):
        charsum_bound_check(f, 3)
    with pytest.raises(NonMonic):
        charsum_bound_check(poly5("2*T^3"), 1)
