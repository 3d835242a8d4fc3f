"""L-polynomials of hyperelliptic function fields by three independent routes."""
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import mpmath
import numpy as np
from loguru import logger

from src.config import settings
from src.algebra.ffield import FieldSpec
from src.algebra.polyring import (
    MonicFilter,
    character_via_resultant,
    enumerate_monic,
    irreducible_table,
    mobius_int,
)
from src.algebra.tables import (
    MonicSieve,
    batch_mulmod,
    field_tables,
    monic_digits,
    prime_character_batch,
)
from src.errors import (
    BudgetExceeded,
    ConsistencyError,
    InsufficientCounts,
    NonPositiveClassNumber,
)
from src.models import CurveRecord, LPolynomial, PrimeCounts, SeriesCheck, WeilReport
from src.zeta.analytic import central_zero_order, exact_value, lpoly_roots
from src.zeta.curve import CurveModel


# ==================== CHARACTER SUM ROUTE ====================

def _check_budget(requested: int, what: str) -> None:
    if requested > settings.enumeration_budget:
        raise BudgetExceeded(requested, settings.enumeration_budget, what)


def _funceq_holds(q: int, g: int, coeffs: Sequence[int]) -> bool:
    if len(coeffs) != 2 * g + 1 or coeffs[0] != 1:
        return False
    return all(coeffs[2 * g - n] == q ** (g - n) * coeffs[n] for n in range(g + 1))


def lpoly_from_charsum(curve: CurveModel) -> LPolynomial:
    """
    c_n = sum of chi_D(f) over monic f of degree n, for n <= 2g + 1.

    Character values are computed on primes by resultants and extended
    multiplicatively over the monic sieve. The full sum at n = 2g + 1 must
    vanish and the coefficients must satisfy the functional equation.
    """
    spec, g = curve.spec, curve.genus
    q = spec.q
    top = 2 * g + 1
    _check_budget(sum(q ** n for n in range(top + 1)), "monic polynomials for the character sum")
    sieve = MonicSieve.build(spec, top)
    values = np.zeros(sieve.size, dtype=np.int8)
    for d in range(1, top + 1):
        for gidx in sieve.prime_indices(d):
            values[gidx] = character_via_resultant(curve.D, sieve.poly(int(gidx)))
    chi = sieve.extend(values)
    sums = [int(chi[sieve.degree_slice(n)].sum(dtype=np.int64)) for n in range(top + 1)]
    if sums[top] != 0:
        raise ConsistencyError(f"full character sum of degree {top} is {sums[top]}, expected 0 for D = {curve.D}")
    coeffs = sums[:top]
    if not _funceq_holds(q, g, coeffs):
        raise ConsistencyError(f"character sums {coeffs} violate the functional equation for D = {curve.D}")
    logger.debug(f"charsum L-polynomial for D = {curve.D}: {coeffs}")
    return LPolynomial(q=q, genus=g, coeffs=coeffs)


def charsum_lpolys_batch(spec: FieldSpec, g: int, D_rows: np.ndarray) -> List[List[int]]:
    """Character-sum route for a block of curves given as a code matrix."""
    q = spec.q
    top = 2 * g + 1
    sieve = MonicSieve.build(spec, top)
    values = np.zeros((D_rows.shape[0], sieve.size), dtype=np.int8)
    for d in range(1, top + 1):
        digits = monic_digits(q, d)
        for gidx in sieve.prime_indices(d):
            P = digits[int(gidx) - sieve.offsets[d]]
            values[:, gidx] = prime_character_batch(spec, D_rows, P)
    chi = sieve.extend(values)
    sums = np.stack([chi[:, sieve.degree_slice(n)].sum(axis=1, dtype=np.int64) for n in range(top + 1)], axis=1)
    if np.any(sums[:, top] != 0):
        raise ConsistencyError(f"nonzero full character sum of degree {top} in batch")
    return [[int(c) for c in row[:top]] for row in sums]


# ==================== SPLITTING ROUTE ====================

def _split_contribution(a: Dict[int, int], d: int, chi: int, max_deg: int) -> None:
    if chi == 1:
        a[d] = a.get(d, 0) + 2
    elif chi == 0:
        a[d] = a.get(d, 0) + 1
    elif 2 * d <= max_deg:
        a[2 * d] = a.get(2 * d, 0) + 1


def prime_counts_via_splitting(curve: CurveModel, max_deg: int) -> PrimeCounts:
    """
    a_d for d <= max_deg from the splitting of base primes in K.

    A base prime P of degree d splits (two primes of degree d) when
    chi_D(P) = 1, ramifies (one of degree d) when it is 0 and stays inert
    (one of degree 2d) when it is -1. The infinite place is ramified of degree 1.
    """
    spec = curve.spec
    a: Dict[int, int] = {d: 0 for d in range(1, max_deg + 1)}
    if max_deg < 1:
        return PrimeCounts(q=spec.q, max_deg=max(max_deg, 0), a={})
    a[1] += 1
    table = irreducible_table(spec, max_deg)
    for d in range(1, max_deg + 1):
        for P in table.by_degree[d]:
            _split_contribution(a, d, character_via_resultant(curve.D, P), max_deg)
    return PrimeCounts(q=spec.q, max_deg=max_deg, a=a)


def splitting_counts_batch(spec: FieldSpec, max_deg: int, D_rows: np.ndarray) -> np.ndarray:
    """(batch, max_deg + 1) matrix of a_d by the splitting route, column 0 unused."""
    q = spec.q
    a = np.zeros((D_rows.shape[0], max_deg + 1), dtype=np.int64)
    if max_deg < 1:
        return a
    a[:, 1] = 1
    sieve = MonicSieve.build(spec, max_deg)
    for d in range(1, max_deg + 1):
        digits = monic_digits(q, d)
        for gidx in sieve.prime_indices(d):
            chi = prime_character_batch(spec, D_rows, digits[int(gidx) - sieve.offsets[d]])
            a[:, d] += np.where(chi == 1, 2, np.where(chi == 0, 1, 0))
            if 2 * d <= max_deg:
                a[:, 2 * d] += chi == -1
    return a


def splitting_lpolys_batch(spec: FieldSpec, g: int, D_rows: np.ndarray) -> np.ndarray:
    """(batch, 2g + 1) matrix of L-polynomial coefficients by the splitting route."""
    counts = splitting_counts_batch(spec, g, D_rows)
    rows = [lpoly_coeffs_from_counts(spec.q, g, row) for row in counts.tolist()]
    return np.array(rows, dtype=np.int64).reshape(len(rows), 2 * g + 1)


def lpoly_coeffs_from_counts(q: int, g: int, a: Sequence[int]) -> List[int]:
    """
    Newton's identities on p_l = q^l + 1 - sum_{d | l} d a_d, l <= g.

    a is indexed by degree (a[0] ignored). The upper half comes from
    c_{2g-n} = q^(g-n) c_n.
    """
    if g == 0:
        return [1]
    power = [0] * (g + 1)
    for ell in range(1, g + 1):
        power[ell] = q ** ell + 1 - sum(d * a[d] for d in range(1, ell + 1) if ell % d == 0)
    e = [1] + [0] * g
    for n in range(1, g + 1):
        total = sum((-1) ** (i - 1) * e[n - i] * power[i] for i in range(1, n + 1))
        if total % n:
            raise ConsistencyError(f"Newton step {n} is not integral (q={q}, a={list(a)})")
        e[n] = total // n
    coeffs = [(-1) ** n * e[n] for n in range(g + 1)]
    coeffs += [q ** (g - n) * coeffs[n] for n in range(g - 1, -1, -1)]
    return coeffs


def lpoly_from_prime_counts(counts: PrimeCounts, q: int, g: int) -> LPolynomial:
    """Reconstruct L from a_1..a_g."""
    missing = [d for d in range(1, g + 1) if d not in counts.a]
    if missing:
        raise InsufficientCounts(f"prime counts up to degree {g} needed, missing {missing}")
    a = [0] + [counts.a[d] for d in range(1, g + 1)]
    return LPolynomial(q=q, genus=g, coeffs=lpoly_coeffs_from_counts(q, g, a))


def lpoly_from_splitting(curve: CurveModel) -> LPolynomial:
    counts = prime_counts_via_splitting(curve, curve.genus)
    return lpoly_from_prime_counts(counts, curve.q, curve.genus)


# ==================== DIRECT POINT COUNT ====================

def point_count_direct(curve: CurveModel, n: int) -> int:
    """
    #{(t, y) in F_{q^n}^2 : y^2 = D(t)} + 1.

    F_{q^n} is F_q[T]/P for the first monic irreducible P of degree n; the
    quadratic character of F_{q^n} is evaluated by Euler's criterion there.
    """
    spec = curve.spec
    q = spec.q
    if n < 1:
        raise ValueError(f"extension degree must be >= 1, got {n}")
    _check_budget(q ** n, f"elements of F_{q}^{n}")
    T = field_tables(spec)
    P = next(enumerate_monic(spec, n, MonicFilter.IRREDUCIBLE)).codes
    points = monic_digits(q, n)[:, :n]
    acc = np.zeros_like(points)
    for c in reversed(curve.D.codes):
        acc = batch_mulmod(T, acc, points, P)
        acc[:, 0] = T.add(acc[:, 0], c)
    eta = prime_character_batch(spec, acc, P)
    return int(q ** n + eta.astype(np.int64).sum() + 1)


# ==================== INVARIANTS ====================

def class_number(L: LPolynomial) -> int:
    """h = L(1); also checks L(1/q) = h q^-g exactly."""
    h = sum(L.coeffs)
    if h < 1:
        raise NonPositiveClassNumber(f"L(1) = {h} for L = {L.coeffs}")
    if exact_value(L, Fraction(1, L.q)) != Fraction(h, L.q ** L.genus):
        raise ConsistencyError(f"L(1/q) != h q^-g for L = {L.coeffs}")
    return h


def check_weil_package(L: LPolynomial) -> WeilReport:
    """Functional equation (exact) and Riemann hypothesis (numerical roots)."""
    funceq = _funceq_holds(L.q, L.genus, L.coeffs)
    roots = lpoly_roots(L) if len(L.coeffs) > 1 else []
    sqrt_q = math.sqrt(L.q)
    moduli = [abs(r) for r, mult in roots for _ in range(mult)]
    deviation = max((abs(m * sqrt_q - 1) for m in moduli), default=0.0)
    return WeilReport(
        funceq=funceq,
        rh=deviation < settings.analytic_rtol,
        max_root_deviation=deviation,
        root_moduli=sorted(moduli),
    )


def effective_divisor_counts(L: LPolynomial, N: int) -> List[int]:
    """
    b_0..b_N, the coefficients of L(u) / ((1 - u)(1 - qu)).

    Verifies b_n - (q+1) b_{n-1} + q b_{n-2} = c_n and, for n > 2g - 2, the
    closed form b_n = h (q^(n+1-g) - 1) / (q - 1).
    """
    q, g = L.q, L.genus
    c = list(L.coeffs)
    b = []
    for n in range(N + 1):
        b.append(sum(c[k] * (q ** (n - k + 1) - 1) // (q - 1) for k in range(min(n, len(c) - 1) + 1)))
    h = sum(c)
    for n, bn in enumerate(b):
        prev1 = b[n - 1] if n >= 1 else 0
        prev2 = b[n - 2] if n >= 2 else 0
        cn = c[n] if n < len(c) else 0
        if bn - (q + 1) * prev1 + q * prev2 != cn:
            raise ConsistencyError(f"divisor-count recurrence fails at n={n}")
        if bn < 0:
            raise ConsistencyError(f"negative divisor count b_{n} = {bn}")
        if n > 2 * g - 2 and bn * (q - 1) != h * (q ** (n + 1 - g) - 1):
            raise ConsistencyError(f"Riemann-Roch closed form fails at n={n}")
    return b


def central_value_is_zero(L: LPolynomial) -> bool:
    """L(q^-1/2) = 0 iff q u^2 - 1 (or r u - 1 when q = r^2) divides L."""
    if len(L.coeffs) <= 1:
        return False
    _, m, _ = central_zero_order(L, 1)
    if m:
        with mpmath.workdps(50):
            value = mpmath.polyval(list(reversed(L.coeffs)), mpmath.power(L.q, -0.5))
        if abs(value) >= settings.central_zero_tolerance:
            raise ConsistencyError(f"exact central zero but |L(q^-1/2)| = {value}")
    return m > 0


def power_sums(L: LPolynomial, n: int) -> List[int]:
    """sum_j pi_j^l for l = 1..n, from L(u) = prod (1 - pi_j u) by Newton's identities."""
    c = L.coeffs
    out: List[int] = []
    for ell in range(1, n + 1):
        # p_l = -l c_l - sum_{i=1}^{l-1} c_i p_{l-i}
        cl = c[ell] if ell < len(c) else 0
        total = -ell * cl - sum((c[i] if i < len(c) else 0) * out[ell - i - 1] for i in range(1, ell))
        out.append(total)
    return out


def prime_counts_from_lpoly(L: LPolynomial, max_deg: int) -> PrimeCounts:
    """a_d by Moebius inversion of sum_{d | l} d a_d = q^l + 1 - p_l."""
    sums = power_sums(L, max_deg)
    N = {ell: L.q ** ell + 1 - sums[ell - 1] for ell in range(1, max_deg + 1)}
    a: Dict[int, int] = {}
    for d in range(1, max_deg + 1):
        total = sum(mobius_int(d // e) * N[e] for e in range(1, d + 1) if d % e == 0)
        if total % d:
            raise ConsistencyError(f"non-integral prime count at degree {d}")
        a[d] = total // d
    return PrimeCounts(q=L.q, max_deg=max_deg, a=a)


def curve_record(curve: CurveModel, L: Optional[LPolynomial] = None) -> CurveRecord:
    L = L or lpoly_from_charsum(curve)
    weil = check_weil_package(L)
    return CurveRecord(
        q=curve.q,
        D=str(curve.D),
        genus=curve.genus,
        L=L.coeffs,
        h=class_number(L),
        rh_ok=weil.rh,
        funceq_ok=weil.funceq,
        central_zero=central_value_is_zero(L),
    )


def log_l_series(curve: CurveModel, sigma: float, max_deg: int) -> SeriesCheck:
    """
    Truncated sum of Lambda(f) chi_D(f) / (deg f |f|^sigma) over monic f of degree <= max_deg.

    The full series is log L(q^-sigma); its absolute value is bounded by
    -log(1 - q^(1-sigma)) for sigma > 1. ok requires both the bound and
    agreement with log L(q^-sigma) up to the truncation tail.
    """
    q = curve.q
    if sigma <= 1:
        raise ValueError(f"the logarithmic series needs sigma > 1, got {sigma}")
    table = irreducible_table(curve.spec, max_deg)
    value = 0.0
    for d in range(1, max_deg + 1):
        for P in table.by_degree[d]:
            chi = character_via_resultant(curve.D, P)
            if chi == 0:
                continue
            for k in range(1, max_deg // d + 1):
                value += chi ** k / (k * q ** (sigma * k * d))
    L = lpoly_from_charsum(curve)
    reference = math.log(L(q ** -sigma).real)
    x = q ** (1 - sigma)
    bound = -math.log(1 - x)
    tail = x ** (max_deg + 1) / ((max_deg + 1) * (1 - x))
    return SeriesCheck(
        name="log_l_series",
        value=value,
        reference=reference,
        truncation_deg=max_deg,
        ok=abs(value) <= bound and abs(value - reference) <= tail * (1 + 1e-9) + 1e-12,
    )
