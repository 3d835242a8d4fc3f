"""Closed-form thresholds, envelopes and count bounds, plus the region classifier.

Every calculator is a pure function of its arguments. Bounds that overflow
binary64 are carried in natural-log scale with a base-q companion.
"""
import math
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple, Union

from loguru import logger

from src.config import settings
from src.algebra.ffield import prime_power_decomposition
from src.analysis.moments import c_alpha_euler_product
from src.errors import InvalidPrimePower, OutsideNorthcottRegion, PoleAt, SigmaNotGreaterThanOne
from src.models import BoundReport, RegionGridRow, RegionKind, RegionVerdict

Real = Union[int, float, Fraction]

CONGRUENCE = "q ≡ 1 mod 4"
NON_EFFECTIVE = "non-effective constant, user supplied"

# largest natural log that still fits a float after exp()
_LOG_FLOAT_MAX = 700.0


def _require_prime_power(q: int) -> Tuple[int, int]:
    pe = prime_power_decomposition(q)
    if pe is None:
        raise InvalidPrimePower(f"q = {q} is not a prime power")
    return pe


def northcott_edge(q: int) -> float:
    """1/2 - log 2 / log q, the right edge of the unconditional Northcott strip."""
    return 0.5 - math.log(2) / math.log(q)


def _reduce(q: int, s: complex) -> Tuple[float, float]:
    """(sigma, tau) with tau reduced into the period 2 pi / log q of q^-s."""
    s = complex(s)
    tau = s.imag
    if tau:
        tau = math.remainder(tau, 2 * math.pi / math.log(q))
    return s.real, tau


def _report(
    name: str,
    log_value: float,
    q: int,
    exact: Optional[Fraction] = None,
    effective: bool = True,
    provenance: str = "",
) -> BoundReport:
    value = math.exp(log_value) if log_value <= _LOG_FLOAT_MAX else None
    return BoundReport(
        name=name,
        value=value,
        log_value=log_value,
        log_q_value=log_value / math.log(q),
        log_scale=value is None,
        exact=str(exact) if exact is not None else None,
        effective=effective,
        provenance=provenance,
    )


# ==================== CLASSIFIER ====================

def classify_point(q: int, s: complex, truncation: Optional[int] = None) -> RegionVerdict:
    """
    Which of the known results governs the triple (q, s, B).

    Clauses are tried in a fixed precedence. The special points 0, 1/2 and 1
    are matched exactly (after reducing Im s modulo the period of q^-s);
    nearby points fall into the surrounding region.
    """
    _require_prime_power(q)
    sigma, tau = _reduce(q, s)
    good = q % 4 == 1
    edge = northcott_edge(q)

    if sigma == 0 and tau == 0:
        if q > 4:
            return RegionVerdict(kind=RegionKind.NORTHCOTT, provenance="(a)", assumptions=["q > 4"])
        return RegionVerdict(kind=RegionKind.NO_RESULT, provenance="none", notes=["the s = 0 clause requires q > 4"])

    if sigma < edge:
        return RegionVerdict(
            kind=RegionKind.NORTHCOTT,
            provenance="(b)",
            assumptions=["Re s < 1/2 - log 2 / log q"],
        )

    if sigma == 0.5 and tau == 0:
        if good:
            return RegionVerdict(
                kind=RegionKind.CENTRAL_LINE_ZETA_VANISHING,
                provenance="(f)",
                assumptions=[CONGRUENCE, "statement for ζ_K(1/2), not ζ_K^*"],
            )
        return RegionVerdict(kind=RegionKind.NO_RESULT, provenance="none", notes=[f"(f) is applied under {CONGRUENCE}"])

    if sigma == 1 and tau == 0:
        if good:
            return RegionVerdict(kind=RegionKind.NON_NORTHCOTT_ALL_B, provenance="(d)", assumptions=[CONGRUENCE])
        return RegionVerdict(kind=RegionKind.NO_RESULT, provenance="none", notes=[f"(d) requires {CONGRUENCE}"])

    if 0.5 < sigma < 1 and tau == 0:
        if good:
            return RegionVerdict(
                kind=RegionKind.NON_NORTHCOTT_ALL_B,
                provenance="(e)",
                assumptions=[CONGRUENCE, "1/2 < s < 1 real"],
            )
        return RegionVerdict(kind=RegionKind.NO_RESULT, provenance="none", notes=[f"(e) requires {CONGRUENCE}"])

    if sigma > 0.5:
        notes: List[str] = []
        if good:
            assumptions = [CONGRUENCE, "s ≠ 1"]
            if sigma < 1:
                assumptions.append("shifted second-moment asymptotics for |L(s, χ_D)|^2")
            if sigma > 1:
                notes.append(f"(c) also applies with B >= {float(right_threshold_B(q, sigma)):.12g}")
            return RegionVerdict(
                kind=RegionKind.NON_NORTHCOTT_LARGE_B,
                threshold_B=moment_threshold_B(q, complex(sigma, tau), truncation),
                provenance="(g)",
                assumptions=assumptions,
                notes=notes,
            )
        if sigma > 1:
            return RegionVerdict(
                kind=RegionKind.NON_NORTHCOTT_LARGE_B,
                threshold_B=float(right_threshold_B(q, sigma)),
                provenance="(c)",
                assumptions=["Re s > 1"],
            )
        return RegionVerdict(kind=RegionKind.NO_RESULT, provenance="none", notes=[f"(g) requires {CONGRUENCE}"])

    if sigma == 0.5:
        return RegionVerdict(
            kind=RegionKind.NO_RESULT,
            provenance="none",
            notes=["off-line central points: deciding whether q^s is a Weil integer is not implemented"],
        )
    return RegionVerdict(
        kind=RegionKind.NO_RESULT,
        provenance="gap",
        notes=["1/2 - log 2 / log q <= Re s < 1/2 is not covered by any clause"],
    )


def region_grid(
    q: int,
    sigmas: Iterable[float],
    taus: Iterable[float] = (0.0,),
    truncation: Optional[int] = None,
) -> List[RegionGridRow]:
    """classify_point over a sigma x tau grid, rows in sigma-major order."""
    taus = list(taus)
    rows: List[RegionGridRow] = []
    for sigma in sigmas:
        for tau in taus:
            verdict = classify_point(q, complex(sigma, tau), truncation)
            rows.append(RegionGridRow(
                q=q,
                sigma=sigma,
                tau=tau,
                kind=verdict.kind,
                provenance=verdict.provenance,
                threshold_B=verdict.threshold_B,
            ))
    logger.info(f"Region grid for q={q}: {len(rows)} points")
    return rows


# ==================== ENVELOPES AND GENUS CAPS ====================

def hasse_envelope(q: int, g: int, u: complex) -> Tuple[float, float]:
    """(max(0, sqrt(q)|u| - 1)^(2g), (sqrt(q)|u| + 1)^(2g)) bracketing |L(u)|."""
    if g < 0:
        raise ValueError(f"genus must be >= 0, got {g}")
    r = math.sqrt(q) * abs(u)
    return max(0.0, r - 1) ** (2 * g), (r + 1) ** (2 * g)


def _strip_log(q: int, sigma: float) -> float:
    """log(q^(1/2 - sigma) - 1), positive exactly in the Northcott strip."""
    edge = northcott_edge(q)
    if not sigma < edge:
        raise OutsideNorthcottRegion(f"Re s = {sigma} is not below 1/2 - log 2/log q = {edge:.6f} for q = {q}")
    return math.log(q ** (0.5 - sigma) - 1)


def a_sigma(q: int, sigma: float) -> float:
    return 1 / (2 * _strip_log(q, sigma))


def b_sigma(q: int, sigma: float) -> float:
    return math.log((1 + q ** -sigma) * (1 + q ** (1 - sigma))) / (2 * _strip_log(q, sigma))


def c_sigma(q: int, sigma: float) -> float:
    """1 / (log q * log(q^(1/2 - sigma) - 1))."""
    return 1 / (math.log(q) * _strip_log(q, sigma))


def _zero_coefficients(q: int) -> Tuple[float, float]:
    """a_0 and b_0 of the cap at s = 0, from h = |zeta*(0)| (q - 1) log q."""
    if q <= 4:
        raise OutsideNorthcottRegion(f"the s = 0 genus cap needs q > 4, got q = {q}")
    denom = 2 * math.log(math.sqrt(q) - 1)
    return 1 / denom, math.log((q - 1) * math.log(q)) / denom


def genus_cap(q: int, s: complex, B: float) -> int:
    """
    Largest genus a field with |zeta*_K(s)| <= B can have.

    Uses |L(u)| >= (sqrt(q)|u| - 1)^(2g); at s = 0 the leading coefficient is
    h / ((1 - q) log q) with h = L(1).
    """
    _require_prime_power(q)
    if B <= 0:
        raise ValueError(f"B must be positive, got {B}")
    sigma, tau = _reduce(q, s)
    if sigma == 0 and tau == 0:
        a, b = _zero_coefficients(q)
    else:
        a, b = a_sigma(q, sigma), b_sigma(q, sigma)
    return max(0, math.floor(a * math.log(B) + b))


# ==================== COUNT BOUNDS ====================

def _couveignes_exponent(q: int, g: int, n: int, Q: float) -> float:
    """Q (log n)^2 (g + n (1 + log_q n))."""
    return Q * math.log(n) ** 2 * (g + n * (1 + math.log(n) / math.log(q)))


def _log_add(*logs: float) -> float:
    top = max(logs)
    return top + math.log(sum(math.exp(x - top) for x in logs))


def couveignes_count_bound(q: int, g: int, n: Optional[int] = None, Q: Optional[float] = None) -> BoundReport:
    """
    Number of fields of genus g presented in degree n.

    Without n the degree runs up to the gonality bound: 2 for g = 1 (plus
    the field itself counted once) and 2g - 2 for g >= 2.
    """
    Q = settings.couveignes_q if Q is None else Q
    logq = math.log(q)
    if g < 0:
        raise ValueError(f"genus must be >= 0, got {g}")
    if n is not None:
        log_value = _couveignes_exponent(q, g, n, Q) * logq
        return _report("couveignes_count", log_value, q, effective=False, provenance=f"degree {n}; {NON_EFFECTIVE}")
    if g == 0:
        return _report("couveignes_count", 0.0, q, exact=Fraction(1), provenance="single genus-0 field")
    if g == 1:
        log_value = _log_add(0.0, _couveignes_exponent(q, 1, 2, Q) * logq)
        return _report("couveignes_count", log_value, q, effective=False, provenance=f"degree 2; {NON_EFFECTIVE}")
    log_value = (_couveignes_exponent(q, g, 2 * g - 2, Q) + 1) * logq
    return _report("couveignes_count", log_value, q, effective=False, provenance=f"degree <= {2 * g - 2}; {NON_EFFECTIVE}")


def size_bound_S(q: int, s: complex, B: float, Q: Optional[float] = None) -> BoundReport:
    """#S_{q,s,B} <= q^(Q c_sigma (log B)^3 B)."""
    _require_prime_power(q)
    Q = settings.couveignes_q if Q is None else Q
    sigma = complex(s).real
    if B <= 1:
        raise ValueError(f"the size bound needs B > 1, got {B}")
    exponent = Q * c_sigma(q, sigma) * math.log(B) ** 3 * B
    return _report("size_bound_S", exponent * math.log(q), q, effective=False, provenance=NON_EFFECTIVE)


def size_bound_variants(
    q: int,
    s: complex,
    B: float,
    Q: Optional[float] = None,
    c1: Optional[float] = None,
) -> List[BoundReport]:
    """The Couveignes bound next to the two consequences of the per-genus counts."""
    c1 = settings.djk_c1 if c1 is None else c1
    sigma = complex(s).real
    a = a_sigma(q, sigma)
    logq = math.log(q)
    return [
        size_bound_S(q, s, B, Q),
        _report(
            "size_bound_lipnowski_tsimerman",
            8.5 * a ** 2 * B ** 2 * logq,
            q,
            effective=False,
            provenance="o(1) taken as 0",
        ),
        _report(
            "size_bound_de_jong_katz",
            c1 * a * math.log(B) * B * logq,
            q,
            effective=False,
            provenance=f"c1 = {c1}; {NON_EFFECTIVE}",
        ),
    ]


def explicit_count_sum(q: int, s: complex, B: float, Q: Optional[float] = None) -> BoundReport:
    """
    The finite sum behind the size bound, before asymptotic simplification.

    2 + q^E(1) + sum over 2 <= g <= genus_cap of q^(E(g) + 1), with E the
    Couveignes exponent at the gonality bound.
    """
    Q = settings.couveignes_q if Q is None else Q
    logq = math.log(q)
    cap = genus_cap(q, s, B)
    terms = [math.log(2), _couveignes_exponent(q, 1, 2, Q) * logq]
    for g in range(2, cap + 1):
        terms.append((_couveignes_exponent(q, g, 2 * g - 2, Q) + 1) * logq)
    return _report("explicit_count_sum", _log_add(*terms), q, effective=False, provenance=f"genus cap {cap}; {NON_EFFECTIVE}")


def misc_count_bounds(q: int, g: int, c1: Optional[float] = None, c2: Optional[float] = None) -> List[BoundReport]:
    """Per-genus field counts from the isogeny-class count and from the moduli count."""
    if g < 1:
        raise ValueError(f"genus must be >= 1, got {g}")
    c1 = settings.djk_c1 if c1 is None else c1
    c2 = settings.djk_c2 if c2 is None else c2
    p, _ = _require_prime_power(q)
    logq = math.log(q)
    lt = g * math.log(2 * g) + 0.25 * g * (g + 1) * logq + 8.25 * g * g * math.log(p)
    djk = c1 * g * math.log(g) + c2 * g * logq
    return [
        _report("lipnowski_tsimerman", lt, q, effective=False, provenance="o(1) in the p-exponent taken as 0"),
        _report("de_jong_katz", djk, q, effective=False, provenance=f"c1 = {c1}, c2 = {c2}; {NON_EFFECTIVE}"),
    ]


# ==================== RIGHT HALF-PLANE ====================

def right_threshold_B(q: int, sigma: Real) -> Union[Fraction, float]:
    """
    1 / ((1 - q^-sigma)(1 - q^(1-sigma))^2).

    Exact when sigma is an integer (or an integral Fraction), a float otherwise.
    Above it every quadratic field lies in S, so S is infinite.
    """
    if not sigma > 1:
        raise SigmaNotGreaterThanOne(f"sigma = {sigma} must exceed 1")
    if isinstance(sigma, (int, Fraction)) and Fraction(sigma).denominator == 1:
        k = int(sigma)
        return 1 / ((1 - Fraction(1, q ** k)) * (1 - Fraction(1, q ** (k - 1))) ** 2)
    x = float(sigma)
    return 1 / ((1 - q ** -x) * (1 - q ** (1 - x)) ** 2)


def right_threshold_report(q: int, sigma: Real) -> BoundReport:
    value = right_threshold_B(q, sigma)
    exact = value if isinstance(value, Fraction) else None
    report = _report("right_threshold_B", math.log(value), q, exact=exact, provenance="(c)")
    return report.model_copy(update={"value": float(value)})


def quadratic_zeta_upper(q: int, sigma: float) -> float:
    """Upper bound of |zeta_K(sigma)| over all quadratic K; same value as the (c) threshold."""
    return float(right_threshold_B(q, sigma))


def moment_threshold_B(q: int, s: complex, truncation: Optional[int] = None) -> float:
    """
    |1 / ((1 - q^-s)(1 - q^(1-s)))| * sqrt(C_{s-1/2}), the Euler product truncated.

    Every B above it admits infinitely many fields with |zeta_K(s)| <= B.
    """
    s = complex(s)
    u = q ** -s
    pole = abs((1 - u) * (1 - q * u))
    if pole == 0:
        raise PoleAt(s)
    C = c_alpha_euler_product(q, s - 0.5, truncation)
    return math.sqrt(C.value) / pole


def a_ell_upper(q: int, g: int, ell: int) -> float:
    """q^l / l + q^(l/3) + (2g / l)(q^(l/2) + q^(l/4))."""
    if ell < 1:
        raise ValueError(f"degree must be >= 1, got {ell}")
    return q ** ell / ell + q ** (ell / 3) + (2 * g / ell) * (q ** (ell / 2) + q ** (ell / 4))


def zeta_sigma_upper(q: int, g: int, sigma: float) -> float:
    """Bound on zeta_K(sigma) for genus g obtained by summing a_ell_upper."""
    if not sigma > 1:
        raise SigmaNotGreaterThanOne(f"sigma = {sigma} must exceed 1")
    sigma = float(sigma)
    inner = math.exp(1 / (q ** (sigma - 1 / 3) - 1)) / (
        (1 - q ** (1 - sigma)) * (1 - q ** (0.5 - sigma)) ** (2 * g) * (1 - q ** (0.25 - sigma)) ** (2 * g)
    )
    return inner ** (q ** sigma / (q ** sigma - 1))


# ==================== CALCULATOR TABLE ====================

def bound_rows(
    q: int,
    sigma: float,
    B: float,
    g: int,
    Q: Optional[float] = None,
    c1: Optional[float] = None,
    c2: Optional[float] = None,
) -> List[BoundReport]:
    """Every calculator applicable at (q, sigma, B, g); inapplicable ones are skipped."""
    rows: List[BoundReport] = []
    if sigma < northcott_edge(q):
        rows.append(_report("c_sigma", math.log(c_sigma(q, sigma)), q))
        if B > 1:
            rows.extend(size_bound_variants(q, sigma, B, Q, c1))
            rows.append(explicit_count_sum(q, sigma, B, Q))
    rows.append(couveignes_count_bound(q, g, Q=Q))
    if g >= 1:
        rows.extend(misc_count_bounds(q, g, c1, c2))
    if sigma > 1:
        rows.append(right_threshold_report(q, sigma))
        rows.append(_report("zeta_sigma_upper", math.log(zeta_sigma_upper(q, g, sigma)), q))
    for ell in range(1, 4):
        rows.append(_report(f"a_ell_upper[{ell}]", math.log(a_ell_upper(q, g, ell)), q))
    return rows
