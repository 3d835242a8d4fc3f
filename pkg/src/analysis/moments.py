"""Shifted second moments of quadratic L-functions over F_q[T].

The shifted divisor function tau, the Euler-product constant C_alpha, the
two-shift main-term prediction, exhaustive empirical moments over H_{2g+1}
and the finite identities used in the moment computation.
"""
import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Tuple

import numpy as np
from loguru import logger

from src.config import settings
from src.algebra.ffield import FieldSpec, field_of_order
from src.algebra.polyring import Poly, factor, irreducible_count, jacobi_symbol, squarefree_count
from src.algebra.tables import MonicSieve, monic_digits, prime_character_batch, squarefree_rows
from src.errors import (
    BudgetExceeded,
    ConsistencyError,
    DegreeOutOfRange,
    DivergentParameter,
    NonMonic,
    PoleInPrediction,
    TrivialCharacter,
    WrongCongruence,
)
from src.models import AFEResult, CAlphaResult, CharsumCheck, MomentReport, SquareAverage
from src.parallel import block_map, pairwise_sum
from src.zeta.curve import CurveModel
from src.zeta.lpoly import lpoly_from_charsum, splitting_lpolys_batch

# relative agreement required between the two forms of each Euler factor
_FORM_TOL = 1e-12
# shift pairs this close to alpha1 = +-alpha2 are evaluated as a limit
_MERGE_TOL = 1e-6
_MERGE_STEP = 1e-3


@dataclass(frozen=True)
class ShiftSet:
    """An ordered pair of shifts (gamma_1, gamma_2)."""

    gamma1: complex
    gamma2: complex

    @classmethod
    def conjugate_pair(cls, alpha: complex) -> "ShiftSet":
        alpha = complex(alpha)
        return cls(alpha, alpha.conjugate())

    def negated(self) -> "ShiftSet":
        return ShiftSet(-self.gamma1, -self.gamma2)


# ==================== SHIFTED DIVISOR FUNCTION ====================

def tau_prime_power(q: int, d: int, m: int, C: ShiftSet) -> complex:
    """tau_C(P^m) = sum_j |P|^(-j gamma_1 - (m - j) gamma_2) for deg P = d."""
    logP = d * math.log(q)
    a = cmath.exp(-complex(C.gamma1) * logP)
    b = cmath.exp(-complex(C.gamma2) * logP)
    return sum(a ** j * b ** (m - j) for j in range(m + 1))


def tau(C: ShiftSet, f: Poly) -> complex:
    """
    Sum over monic factorizations f = f1 f2 of |f1|^-gamma_1 |f2|^-gamma_2.

    Multiplicative over the prime-power factorization of f.
    """
    if f.is_zero() or not f.is_monic():
        raise NonMonic(f"{f} is not a nonzero monic polynomial")
    out = 1 + 0j
    for P, m in factor(f).factors:
        out *= tau_prime_power(f.spec.q, int(P.degree), m, C)
    return out


# ==================== EULER PRODUCTS ====================

def _clog1p(z: complex) -> complex:
    if abs(z) < 1e-5:
        return z - z * z / 2 + z ** 3 / 3
    return cmath.log(1 + z)


def _even_part_minus_one(a: complex, b: complex) -> complex:
    """
    E - 1, where E is the even part of 1 / ((1 - a y)(1 - b y)) at y = 1.

    With S = a + b and P = ab, E = (1 + P) / ((1 + P)^2 - S^2), so
    E - 1 = (S^2 - P - P^2) / ((1 + P)^2 - S^2) without cancellation.
    """
    S = a + b
    P = a * b
    return (S * S - P - P * P) / ((1 + P) ** 2 - S * S)


def _even_series_minus_one(q: int, d: int, C: ShiftSet) -> complex:
    """sum_{l >= 1} tau_C(P^2l) / |P|^l, stopped once a geometric tail bound is negligible."""
    x = float(q) ** -d
    logP = d * math.log(q)
    r = x * math.exp(-2 * min(complex(C.gamma1).real, complex(C.gamma2).real) * logP)
    if r >= 1:
        raise DivergentParameter(f"tau series diverges at degree {d} for shifts {C}")
    total = 0j
    for ell in range(1, 100_000):
        total += tau_prime_power(q, d, 2 * ell, C) * x ** ell
        # sum_{k > l} (2k + 1) r^k <= (2l + 3) r^(l+1) / (1 - r)^2
        if (2 * ell + 3) * r ** (ell + 1) / (1 - r) ** 2 <= 1e-17 * max(1.0, abs(total)):
            break
    return total


def _bracket_minus_one(q: int, d: int, C: ShiftSet) -> complex:
    """
    (1 + 1/|P|)^-1 sum_{l >= 1} tau_C(P^2l) / |P|^l for deg P = d.

    The closed two-geometric-series form is checked against the tau series.
    """
    x = float(q) ** -d
    logP = d * math.log(q)
    a = cmath.exp(-(0.5 + complex(C.gamma1)) * logP)
    b = cmath.exp(-(0.5 + complex(C.gamma2)) * logP)
    closed = _even_part_minus_one(a, b)
    series = _even_series_minus_one(q, d, C)
    if abs(closed - series) > _FORM_TOL * max(1.0, abs(closed)):
        raise ConsistencyError(f"Euler factor forms disagree at degree {d}: {closed} vs {series}")
    return closed / (1 + x)


def c_alpha_euler_product(q: int, alpha: complex, truncation: Optional[int] = None) -> CAlphaResult:
    """
    C_alpha: product over monic irreducible P with deg P <= N of the moment bracket.

    Args:
        q: Field size
        alpha: Shift with Re alpha > 0
        truncation: Prime degree N (defaults to settings.euler_truncation)

    Returns:
        CAlphaResult with a crude bound on the omitted log-tail
    """
    alpha = complex(alpha)
    N = settings.euler_truncation if truncation is None else truncation
    if alpha.real <= 0:
        raise DivergentParameter(f"C_alpha needs Re alpha > 0, got {alpha}")
    if N < 1:
        raise ValueError(f"truncation degree must be >= 1, got {N}")
    C = ShiftSet.conjugate_pair(alpha)
    log_value = 0.0
    for d in range(1, N + 1):
        log_value += irreducible_count(q, d) * math.log1p(_bracket_minus_one(q, d, C).real)

    # |bracket - 1| <= 3y / (1 - y)^2 with y = |P|^(-m), m = min(2 Re alpha + 1, 2)
    m = min(2 * alpha.real + 1, 2.0)
    first = N + 1
    y0 = float(q) ** (-first * m)
    ratio = float(q) ** (1 - m)
    tail = 2 * 3 * float(q) ** (first * (1 - m)) / (first * (1 - y0) ** 2 * (1 - ratio))
    note = f"first omitted degree {first}; |log tail| <= {tail:.3e} (crude)"
    return CAlphaResult(value=math.exp(log_value), tail_note=note, tail_bound=tail, truncation_deg=N)


def _zeta_q(q: int, x: complex) -> complex:
    """zeta_q(1 + x) = 1 / (1 - q^-x)."""
    denom = 1 - cmath.exp(-complex(x) * math.log(q))
    if abs(denom) < 1e-14:
        raise PoleInPrediction(f"zeta_q has a pole at 1 + {x}")
    return 1 / denom


def _a_C(q: int, C: ShiftSet, N: int) -> complex:
    """A_C(1) truncated at prime degree N."""
    pairs = [(C.gamma1, C.gamma1), (C.gamma1, C.gamma2), (C.gamma2, C.gamma2)]
    log_value = 0j
    for d in range(1, N + 1):
        logP = d * math.log(q)
        local = _clog1p(_bracket_minus_one(q, d, C))
        for gi, gj in pairs:
            local += _clog1p(-cmath.exp(-(1 + gi + gj) * logP))
        log_value += irreducible_count(q, d) * local
    return cmath.exp(log_value)


def _subset_sum(q: int, g: int, shifts: Tuple[complex, complex], N: int) -> complex:
    total = 0j
    for flips in product((False, True), repeat=2):
        gammas = tuple(-a if flip else a for a, flip in zip(shifts, flips))
        flipped = sum(a for a, flip in zip(shifts, flips) if flip)
        C = ShiftSet(*gammas)
        zeta_part = (
            _zeta_q(q, 2 * C.gamma1) * _zeta_q(q, C.gamma1 + C.gamma2) * _zeta_q(q, 2 * C.gamma2)
        )
        weight = cmath.exp(-2 * g * flipped * math.log(q))
        total += weight * _a_C(q, C, N) * zeta_part
    return total


def _merged_limit(q: int, g: int, shifts: Tuple[complex, complex], N: int) -> complex:
    """
    The subset sum at alpha1 = +-alpha2, where two zeta_q(1 + 0) poles cancel.

    alpha2 is moved off the pole by +-ih; the symmetric mean is even in h,
    so one Richardson step removes the h^2 term.
    """
    a1, a2 = shifts

    def symmetric(h: float) -> complex:
        return (_subset_sum(q, g, (a1, a2 + 1j * h), N) + _subset_sum(q, g, (a1, a2 - 1j * h), N)) / 2

    coarse = symmetric(_MERGE_STEP)
    fine = symmetric(_MERGE_STEP / 2)
    return (4 * fine - coarse) / 3


def predicted_shifted_moment(
    q: int,
    g: int,
    alpha1: complex,
    alpha2: complex,
    truncation: Optional[int] = None,
) -> complex:
    """
    Main term of the shifted moment of L(1/2 + alpha1) L(1/2 + alpha2) over H_{2g+1}.

    Sum over subsets S of {alpha1, alpha2} of q^(-2g sum S) S_C, where C
    negates the shifts in S and S_C = A_C(1) prod_{i<=j} zeta_q(1 + gamma_i + gamma_j).
    When alpha1 = +-alpha2 two of the four terms have opposite poles and the
    sum is returned as its limit.
    """
    N = settings.euler_truncation if truncation is None else truncation
    shifts = (complex(alpha1), complex(alpha2))
    for a in shifts:
        if a == 0 or not 0 < abs(a.real) < 0.5:
            raise DivergentParameter(f"shifts need 0 < |Re alpha| < 1/2, got {a}")
    a1, a2 = shifts
    if min(abs(a1 - a2), abs(a1 + a2)) < _MERGE_TOL:
        logger.debug(f"Shifts {a1} and {a2} meet a cancelling pole; evaluating the limit")
        return _merged_limit(q, g, shifts, N)
    return _subset_sum(q, g, shifts, N)


# ==================== EXHAUSTIVE MOMENTS ====================

def _ensemble(spec: FieldSpec, g: int) -> np.ndarray:
    """H_{2g+1} as a code matrix, after the budget check."""
    requested = spec.q ** (2 * g + 1)
    if requested > settings.enumeration_budget:
        raise BudgetExceeded(requested, settings.enumeration_budget, f"monic polynomials of degree {2 * g + 1}")
    return squarefree_rows(spec, 2 * g + 1)


def second_moment_exhaustive(
    q: int,
    g: int,
    alpha: complex,
    truncation: Optional[int] = None,
    threads: Optional[int] = None,
) -> MomentReport:
    """
    Mean of |L(1/2 + alpha, chi_D)|^2 over all D in H_{2g+1}, against C_alpha.

    L-polynomials come from the splitting route, block by block in
    enumeration order; block sums are combined by a fixed pairwise tree so
    the mean does not depend on the thread count.
    """
    alpha = complex(alpha)
    if alpha.real <= 0:
        raise DivergentParameter(f"the second moment needs Re alpha > 0, got {alpha}")
    if q % 4 != 1:
        raise WrongCongruence(f"q = {q} is not 1 mod 4")
    spec = field_of_order(q)
    rows = _ensemble(spec, g)
    u = cmath.exp(-(0.5 + alpha) * math.log(q))
    powers = np.array([u ** k for k in range(2 * g + 1)], dtype=complex)
    logger.info(f"Second moment over H_{2 * g + 1} at q={q}: {len(rows)} curves, alpha={alpha}")

    def block_sum(lo: int, hi: int) -> float:
        coeffs = splitting_lpolys_batch(spec, g, rows[lo:hi])
        values = coeffs.astype(complex) @ powers
        return float(np.sum(values.real ** 2 + values.imag ** 2))

    total = pairwise_sum(block_map(block_sum, len(rows), threads))
    empirical = total / len(rows)
    C = c_alpha_euler_product(q, alpha, truncation)

    flag = C.tail_note
    error_scale = None
    if alpha.real >= 0.5:
        error_scale = q ** (-alpha.real * g) + 4 ** g * q ** (-2 * alpha.real * g)
        if abs(alpha.real - 0.5) < 1e-12 and q <= 16:
            flag += "; Re alpha = 1/2 with q <= 16: convergence to the main term is not asserted"
    report = MomentReport(
        q=q,
        g=g,
        alpha=alpha,
        empirical=empirical,
        predicted=C.value,
        truncation_deg=C.truncation_deg,
        tail_flag=flag,
        ratio=empirical / C.value,
        curves=len(rows),
        error_scale=error_scale,
    )
    logger.info(f"Empirical {empirical:.6f} vs predicted {C.value:.6f} (ratio {report.ratio:.4f})")
    return report


# ==================== FINITE IDENTITIES ====================

def _character_table(curve: CurveModel, top: int) -> Tuple[MonicSieve, np.ndarray]:
    """chi_D on every monic polynomial of degree <= top, extended from the primes."""
    spec = curve.spec
    sieve = MonicSieve.build(spec, max(top, 1))
    values = np.zeros(sieve.size, dtype=np.int8)
    for d in range(1, sieve.max_deg + 1):
        digits = monic_digits(spec.q, d)
        for gidx in sieve.prime_indices(d):
            P = digits[int(gidx) - sieve.offsets[d]]
            values[gidx] = prime_character_batch(spec, np.array([curve.D.codes]), P)[0]
    return sieve, sieve.extend(values)


def _tau_table(sieve: MonicSieve, top: int, C: ShiftSet) -> np.ndarray:
    q = sieve.q
    out = np.ones(sieve.offsets[top + 1], dtype=complex)
    for gidx in range(1, len(out)):
        value = 1 + 0j
        for prime, m in sieve.factor_indices(gidx):
            d = next(k for k in range(sieve.max_deg + 1) if prime < sieve.offsets[k + 1])
            value *= tau_prime_power(q, d, m, C)
        out[gidx] = value
    return out


def approx_funceq_eval(curve: CurveModel, alpha: complex) -> AFEResult:
    """
    Both sides of the exact finite expression for |L(1/2 + alpha, chi_D)|^2.

    The right side is the tau-weighted character sum over monic f of degree
    <= 2g plus q^(-4g Re alpha) times the dual sum of degree <= 2g - 1.
    """
    alpha = complex(alpha)
    q, g = curve.q, curve.genus
    requested = sum(q ** n for n in range(2 * g + 1))
    if requested > settings.enumeration_budget:
        raise BudgetExceeded(requested, settings.enumeration_budget, "monic polynomials for the functional equation")
    L = lpoly_from_charsum(curve)
    lhs = abs(L(cmath.exp(-(0.5 + alpha) * math.log(q)))) ** 2

    top = 2 * g
    sieve, chi = _character_table(curve, top)
    size = sieve.offsets[top + 1]
    degrees = np.repeat(np.arange(top + 1), np.diff(np.array(sieve.offsets[:top + 2])))
    weight = float(q) ** (-0.5 * degrees)
    chi = chi[:size].astype(float)
    C = ShiftSet.conjugate_pair(alpha)
    main = np.sum(_tau_table(sieve, top, C) * chi * weight)
    dual = 0j
    if g > 0:
        cut = sieve.offsets[top]
        dual = np.sum(_tau_table(sieve, top - 1, C.negated()) * chi[:cut] * weight[:cut])
    rhs = complex(main + q ** (-4 * g * alpha.real) * dual)
    if abs(rhs.imag) > 1e-9 * (1 + abs(rhs)):
        raise ConsistencyError(f"approximate functional equation gave a complex value {rhs}")
    rhs_real = rhs.real
    return AFEResult(lhs=lhs, rhs=rhs_real, ok=abs(lhs - rhs_real) <= 1e-9 * (1 + abs(lhs)))


def charsum_bound_check(f: Poly, n: int) -> CharsumCheck:
    """|sum over monic B of degree n of (B/f)| against binom(deg f - 1, n) q^(n/2)."""
    if f.is_zero() or not f.is_monic():
        raise NonMonic(f"{f} is not a nonzero monic polynomial")
    deg = int(f.degree)
    if not 0 <= n < deg:
        raise DegreeOutOfRange(f"n = {n} must satisfy 0 <= n < deg f = {deg}")
    if all(m % 2 == 0 for _, m in factor(f).factors):
        raise TrivialCharacter(f"{f} is a square, so (./f) is principal")
    q = f.spec.q
    total = 1
    if n > 0:
        sieve = MonicSieve.build(f.spec, n)
        values = np.zeros(sieve.size, dtype=np.int8)
        for d in range(1, n + 1):
            for gidx in sieve.prime_indices(d):
                values[gidx] = jacobi_symbol(sieve.poly(int(gidx)), f)
        total = int(sieve.extend(values)[sieve.degree_slice(n)].sum(dtype=np.int64))
    lhs = float(abs(total))
    rhs = math.comb(deg - 1, n) * q ** (n / 2)
    return CharsumCheck(lhs=lhs, rhs=rhs, ok=lhs <= rhs * (1 + 1e-12))


def square_average_check(q: int, g: int, f: Poly, constant: Optional[float] = None) -> SquareAverage:
    """
    Mean of chi_D(f^2) over H_{2g+1} against prod_{P | f} (1 + 1/|P|)^-1.

    chi_D(f^2) is 1 when D is coprime to f and 0 otherwise, so the mean is
    an exact proportion.
    """
    if f.is_zero() or not f.is_monic():
        raise NonMonic(f"{f} is not a nonzero monic polynomial")
    constant = settings.square_average_constant if constant is None else constant
    spec = f.spec
    rows = _ensemble(spec, g)
    primes = factor(f).primes
    coprime = np.ones(len(rows), dtype=bool)
    main = Fraction(1)
    for P in primes:
        coprime &= prime_character_batch(spec, rows, P.codes) != 0
        main *= Fraction(P.norm, P.norm + 1)
    empirical = Fraction(int(coprime.sum()), squarefree_count(q, 2 * g + 1))
    error = abs(float(empirical - main))
    bound = constant * q ** (-2 * g)
    return SquareAverage(
        empirical=float(empirical),
        main_term=float(main),
        error=error,
        error_bound=bound,
        ok=error <= bound,
    )
