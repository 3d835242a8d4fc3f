"""Evaluation of zeta functions, special values and L-polynomial roots."""
import cmath
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from loguru import logger

from src.config import settings
from src.algebra.polyring import irreducible_count
from src.errors import PoleAt
from src.models import LPolynomial, PrimeCounts, SeriesCheck, SpecialValue

QPoly = List[Fraction]

# tolerance for recognising q^{-s} as one of the exact special points
_POINT_TOL = 1e-12


# ==================== EXACT POLYNOMIALS OVER Q ====================

def _q_strip(a: QPoly) -> QPoly:
    while a and a[-1] == 0:
        a.pop()
    return a


def _q_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> QPoly:
    n = max(len(a), len(b))
    return _q_strip([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _q_deriv(a: Sequence[Fraction]) -> QPoly:
    return _q_strip([i * a[i] for i in range(1, len(a))])


def _q_divmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> Tuple[QPoly, QPoly]:
    rem = list(a)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return [], _q_strip(rem)
    quot = [Fraction(0)] * (len(rem) - db)
    for shift in range(len(rem) - 1 - db, -1, -1):
        c = rem[shift + db] / b[-1]
        quot[shift] = c
        if c:
            for i in range(db + 1):
                rem[shift + i] -= c * b[i]
    return _q_strip(quot), _q_strip(rem[:db])


def _q_monic_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> QPoly:
    a, b = list(a), list(b)
    while b:
        a, b = b, _q_divmod(a, b)[1]
    return [c / a[-1] for c in a]


def squarefree_decomposition(coeffs: Sequence[int]) -> List[Tuple[QPoly, int]]:
    """Yun's algorithm over Q: [(a_i, i)] with f = lc * prod a_i^i, a_i squarefree and coprime."""
    f = _q_strip([Fraction(c) for c in coeffs])
    if len(f) <= 1:
        return []
    fp = _q_deriv(f)
    a = _q_monic_gcd(f, fp)
    b = _q_divmod(f, a)[0]
    c = _q_divmod(fp, a)[0]
    d = _q_sub(c, _q_deriv(b))
    out = []
    i = 1
    while len(b) > 1:
        a = _q_monic_gcd(b, d)
        if len(a) > 1:
            out.append((a, i))
        b = _q_divmod(b, a)[0]
        c = _q_divmod(d, a)[0]
        d = _q_sub(c, _q_deriv(b))
        i += 1
    return out


def divide_exactly(coeffs: Sequence[int], divisor: Sequence[int]) -> Tuple[List[Fraction], int]:
    """Strip the largest power of divisor from coeffs; returns (cofactor, multiplicity)."""
    f = [Fraction(c) for c in coeffs]
    div = [Fraction(c) for c in divisor]
    m = 0
    while len(f) >= len(div):
        quot, rem = _q_divmod(f, div)
        if rem:
            break
        f, m = quot, m + 1
    return f, m


# ==================== ROOTS ====================

def aberth_roots(coeffs: Sequence[float], radius: float) -> np.ndarray:
    """
    Roots of a polynomial (coefficients constant first) by Aberth-Ehrlich iteration.

    Starts from a deterministic ring of the given radius and stops at
    settings.root_tolerance or settings.root_max_iterations.
    """
    c = np.array(list(coeffs)[::-1], dtype=complex)
    n = len(c) - 1
    if n <= 0:
        return np.zeros(0, dtype=complex)
    if n == 1:
        return np.array([-c[1] / c[0]])
    dc = np.polyder(c)
    k = np.arange(n)
    z = radius * np.exp(1j * (2 * np.pi * k / n + 0.4))
    tol = settings.root_tolerance
    with np.errstate(divide="ignore", invalid="ignore"):
        for _ in range(settings.root_max_iterations):
            ratio = np.polyval(c, z) / np.polyval(dc, z)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            w = ratio / (1.0 - ratio * inv.sum(axis=1))
            w = np.where(np.isfinite(w), w, 0.0)
            z = z - w
            if np.max(np.abs(w)) <= tol * max(radius, float(np.max(np.abs(z)))):
                break
        else:
            logger.warning(f"Aberth iteration hit the cap of {settings.root_max_iterations} steps (degree {n})")
        # two Newton polishing steps
        for _ in range(2):
            step = np.polyval(c, z) / np.polyval(dc, z)
            z = z - np.where(np.isfinite(step), step, 0.0)
    return z


def lpoly_roots(L: LPolynomial) -> List[Tuple[complex, int]]:
    """Distinct roots of L(u) with exact multiplicities from the squarefree decomposition."""
    radius = L.q ** -0.5
    out: List[Tuple[complex, int]] = []
    for factor, mult in squarefree_decomposition(L.coeffs):
        for root in aberth_roots([float(c) for c in factor], radius):
            out.append((complex(root), mult))
    return out


# ==================== ZETA VALUES ====================

def _u(q: int, s: complex) -> complex:
    return cmath.exp(-complex(s) * math.log(q))


def point_kind(q: int, u0: complex) -> Optional[str]:
    r = q ** -0.5
    if abs(u0 - 1) <= _POINT_TOL:
        return "one"
    if abs(u0 * q - 1) <= _POINT_TOL:
        return "inv_q"
    if abs(u0 - r) <= _POINT_TOL * r:
        return "central_plus"
    if abs(u0 + r) <= _POINT_TOL * r:
        return "central_minus"
    return None


def is_pole(q: int, s: complex) -> bool:
    return point_kind(q, _u(q, s)) in ("one", "inv_q")


def genus0_zeta(q: int, s: complex) -> complex:
    """Zeta of the rational function field, 1 / ((1 - q^-s)(1 - q^(1-s)))."""
    if is_pole(q, s):
        raise PoleAt(s)
    u = _u(q, s)
    return 1 / ((1 - u) * (1 - q * u))


def base_zeta_finite(q: int, s: complex) -> complex:
    """Zeta of F_q[T] without the prime at infinity, 1 / (1 - q^(1-s))."""
    u = _u(q, s)
    if abs(u * q - 1) <= _POINT_TOL:
        raise PoleAt(s)
    return 1 / (1 - q * u)


def zeta_eval(L: LPolynomial, s: complex) -> complex:
    """zeta_K(s) = L(q^-s) / ((1 - q^-s)(1 - q^(1-s)))."""
    q = L.q
    if is_pole(q, s):
        raise PoleAt(s)
    u = _u(q, s)
    return L(u) / ((1 - u) * (1 - q * u))


def xi_eval(L: LPolynomial, s: complex) -> complex:
    """xi_K(s) = q^((g-1)s) zeta_K(s), symmetric under s -> 1 - s."""
    s = complex(s)
    return cmath.exp((L.genus - 1) * s * math.log(L.q)) * zeta_eval(L, s)


def exact_value(L: LPolynomial, u: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(L.coeffs):
        acc = acc * u + c
    return acc


def central_zero_order(L: LPolynomial, sign: int = 1) -> Tuple[List[Fraction], int, float]:
    """
    Exact multiplicity m of L at u0 = sign * q^(-1/2).

    The stripped factor is (q u^2 - 1) for non-square q and (r u - sign)
    with r = sqrt(q) otherwise. Returns (cofactor, m, psi) where the factor
    equals (u - u0) * psi(u) and psi = psi(u0).
    """
    q = L.q
    r = math.isqrt(q)
    u0 = sign * q ** -0.5
    if r * r == q:
        cofactor, m = divide_exactly(L.coeffs, [-sign, r])
        return cofactor, m, float(r)
    cofactor, m = divide_exactly(L.coeffs, [-1, 0, q])
    return cofactor, m, 2 * q * u0


def zeta_special_value(L: LPolynomial, s: complex) -> SpecialValue:
    """
    Leading Taylor coefficient of zeta_K at s and its order.

    With u0 = q^-s and F(u) = (u - u0)^m G(u), the coefficient of (t - s)^m
    is (-u0 log q)^m G(u0). Orders are exact at u0 in {1, 1/q, +-q^(-1/2)}
    and numeric elsewhere.
    """
    s = complex(s)
    q = L.q
    logq = math.log(q)
    u0 = _u(q, s)
    kind = point_kind(q, u0)

    if kind == "one":
        h = sum(L.coeffs)
        return SpecialValue(at=s, order=-1, leading=complex(h / ((1 - q) * logq)))
    if kind == "inv_q":
        value = float(exact_value(L, Fraction(1, q)))
        return SpecialValue(at=s, order=-1, leading=complex(value / ((1 - 1 / q) * logq)))
    if kind in ("central_plus", "central_minus"):
        sign = 1 if kind == "central_plus" else -1
        u0 = sign * q ** -0.5
        cofactor, m, psi = central_zero_order(L, sign)
        rest = 0.0
        for c in reversed(cofactor):
            rest = rest * u0 + float(c)
        G = psi ** m * rest / ((1 - u0) * (1 - q * u0))
        return SpecialValue(at=s, order=m, leading=complex((-u0 * logq) ** m * G))

    den = (1 - u0) * (1 - q * u0)
    value = L(u0)
    scale = sum(abs(c) * abs(u0) ** i for i, c in enumerate(L.coeffs))
    if abs(value) > settings.analytic_rtol * scale:
        return SpecialValue(at=s, order=0, leading=value / den)

    roots = lpoly_roots(L)
    nearest = min(range(len(roots)), key=lambda j: abs(roots[j][0] - u0)) if roots else None
    if nearest is None or abs(roots[nearest][0] - u0) > math.sqrt(settings.analytic_rtol) * abs(u0):
        logger.warning(f"|L(q^-s)| is tiny at s={s} but no root matches; reporting order 0")
        return SpecialValue(at=s, order=0, leading=value / den, order_confidence="numeric")
    m = roots[nearest][1]
    G = complex(L.coeffs[-1])
    for j, (rho, mult) in enumerate(roots):
        if j != nearest:
            G *= (u0 - rho) ** mult
    G /= den
    logger.info(f"Numeric zero of order {m} detected at s={s}")
    return SpecialValue(at=s, order=m, leading=(-u0 * logq) ** m * G, order_confidence="numeric")


# ==================== SERIES AND PRODUCTS ====================

def euler_product_zeta(counts: PrimeCounts, s: complex, max_deg: Optional[int] = None) -> complex:
    """Truncated prod_n (1 - q^(-ns))^(-a_n); converges to zeta_K(s) for Re s > 1."""
    q = counts.q
    top = counts.max_deg if max_deg is None else min(max_deg, counts.max_deg)
    u = _u(q, s)
    out = 1 + 0j
    for n in range(1, top + 1):
        out *= (1 - u ** n) ** (-counts.a.get(n, 0))
    return out


def base_log_zeta_series(q: int, sigma: float, max_deg: int) -> SeriesCheck:
    """
    Truncated sum of Lambda(A) / (deg A |A|^sigma) over monic A, against -log(1 - q^(1-sigma)).

    The tail beyond max_deg is at most q^((1-sigma)(N+1)) / ((N+1)(1 - q^(1-sigma))).
    """
    x = q ** (1 - sigma)
    value = 0.0
    for d in range(1, max_deg + 1):
        count = irreducible_count(q, d)
        for k in range(1, max_deg // d + 1):
            value += count / (k * q ** (sigma * k * d))
    reference = -math.log(1 - x)
    tail = x ** (max_deg + 1) / ((max_deg + 1) * (1 - x))
    return SeriesCheck(
        name="base_log_zeta_series",
        value=value,
        reference=reference,
        truncation_deg=max_deg,
        ok=0 <= reference - value <= tail * (1 + 1e-9) + 1e-15,
    )


def high_precision_zeta(L: LPolynomial, s: complex, dps: int = 40) -> complex:
    """Independent mpmath evaluation of zeta_K(s)."""
    with mpmath.workdps(dps):
        u = mpmath.power(L.q, -mpmath.mpc(s))
        num = mpmath.polyval(list(reversed(L.coeffs)), u)
        return complex(num / ((1 - u) * (1 - L.q * u)))
