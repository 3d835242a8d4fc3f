"""Desk-scale materialization of S_{q,s,B} = {[K] : |zeta*_K(s)| <= B}.

Fields are imaginary hyperelliptic y^2 = D(T), D in H_{2g+1}, plus the
rational function field at g = 0. Each genus is processed as one code
matrix: L-polynomials by the splitting route, special values vectorized
where the point is generic.
"""
import cmath
import math
from typing import Iterator, List, Optional, Set, Tuple

import numpy as np
from loguru import logger

from src.config import settings
from src.algebra.ffield import FieldSpec, field_of_order
from src.algebra.literals import parse_poly
from src.algebra.polyring import Poly
from src.algebra.tables import field_tables, local_index, squarefree_rows
from src.analysis.bounds import classify_point, genus_cap
from src.errors import BudgetExceeded, EvenCharacteristic, WrongCongruence
from src.models import (
    CentralZeroReport,
    DedupeMode,
    EnumerationScope,
    LPolynomial,
    NorthcottReport,
    NorthcottRow,
    RegionKind,
    Witness,
    WitnessProperty,
)
from src.parallel import block_map
from src.zeta.analytic import point_kind, zeta_special_value
from src.zeta.curve import CurveModel, make_curve
from src.zeta.lpoly import central_value_is_zero, lpoly_from_charsum, splitting_lpolys_batch

SCOPE_CAVEAT = (
    "only imaginary hyperelliptic models y^2 = D(T) with deg D odd and the genus-0 field "
    "are enumerated; non-hyperelliptic fields of genus >= 3 are not"
)


# ==================== AFFINE ORBITS ====================

def _substitution_matrix(spec: FieldSpec, n: int, a: int, b: int) -> List[List[int]]:
    """M[i][j] = coefficient of T^j in a^-n (aT + b)^i."""
    scale = spec.inv(spec.pow(a, n))
    M = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        for j in range(i + 1):
            binom = spec.from_int(math.comb(i, j) % spec.p)
            term = spec.mul(binom, spec.mul(spec.pow(a, j), spec.pow(b, i - j)))
            M[i][j] = spec.mul(term, scale)
    return M


def orbit_representatives(spec: FieldSpec, rows: np.ndarray) -> np.ndarray:
    """
    Enumeration index of the smallest member of each row's affine orbit.

    The group is T -> aT + b with a a nonzero square, followed by division by
    a^n, which keeps D monic of the same degree and leaves K unchanged.
    """
    q = spec.q
    n = rows.shape[1] - 1
    T = field_tables(spec)
    squares = sorted({spec.mul(x, x) for x in range(1, q)})
    best = local_index(rows, q)
    for a in squares:
        for b in range(q):
            if a == 1 and b == 0:
                continue
            M = _substitution_matrix(spec, n, a, b)
            image = np.zeros_like(rows)
            for i in range(n + 1):
                for j in range(i + 1):
                    if M[i][j]:
                        image[:, j] = T.add(image[:, j], T.mul(rows[:, i], M[i][j]))
            best = np.minimum(best, local_index(image, q))
    return best


# ==================== ENUMERATION ====================

def _genus_block(
    spec: FieldSpec,
    g: int,
    dedupe: DedupeMode,
    threads: Optional[int] = None,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(D rows, L coefficient rows, orbit representative indices) for one genus, deduplicated."""
    rows = squarefree_rows(spec, 2 * g + 1)
    blocks = block_map(lambda lo, hi: splitting_lpolys_batch(spec, g, rows[lo:hi]), len(rows), threads)
    coeffs = np.concatenate(blocks) if blocks else np.zeros((0, 2 * g + 1), dtype=np.int64)
    reps = orbit_representatives(spec, rows)
    if dedupe is DedupeMode.AFFINE_ORBIT:
        keep = reps == local_index(rows, spec.q)
    elif dedupe is DedupeMode.BY_LPOLYNOMIAL:
        _, first = np.unique(coeffs, axis=0, return_index=True)
        keep = np.zeros(len(rows), dtype=bool)
        keep[first] = True
    else:
        keep = np.ones(len(rows), dtype=bool)
    return rows[keep], coeffs[keep], reps[keep]


def _check_scope(scope: EnumerationScope, spec: FieldSpec) -> None:
    if spec.p == 2:
        raise EvenCharacteristic(f"hyperelliptic enumeration needs odd q, got {spec.q}")
    if scope.genus_max > settings.genus_max_cap:
        raise BudgetExceeded(scope.genus_max, settings.genus_max_cap, "genus")
    requested = sum(spec.q ** (2 * g + 1) for g in range(scope.genus_min, scope.genus_max + 1))
    if requested > scope.budget:
        raise BudgetExceeded(requested, scope.budget, "monic polynomials")


def enumerate_fields(scope: EnumerationScope, threads: Optional[int] = None) -> Iterator[Tuple[CurveModel, LPolynomial]]:
    """
    Stream (curve, L) over the scope, genus ascending then D in enumeration order.

    Raises:
        BudgetExceeded: if the scope needs more than scope.budget polynomials
    """
    spec = field_of_order(scope.q)
    _check_scope(scope, spec)
    for g in range(scope.genus_min, scope.genus_max + 1):
        rows, coeffs, _ = _genus_block(spec, g, scope.dedupe, threads)
        logger.info(f"Genus {g}: {len(rows)} fields ({scope.dedupe.value})")
        for row, c in zip(rows.tolist(), coeffs.tolist()):
            yield CurveModel(spec, Poly(spec, tuple(row)), g), LPolynomial(q=spec.q, genus=g, coeffs=c)


# ==================== S_{q,s,B} ====================

def envelope_lower(q: int, s: complex, g: int) -> Optional[float]:
    """
    Lower bound of |zeta*_K(s)| over all fields of genus g, or None when none is available.

    From |L(u)| >= (sqrt(q)|u| - 1)^(2g); at s = 0 from h >= (sqrt(q) - 1)^(2g).
    """
    u = cmath.exp(-complex(s) * math.log(q))
    kind = point_kind(q, u)
    if kind == "one":
        if q <= 4:
            return None
        return (math.sqrt(q) - 1) ** (2 * g) / ((q - 1) * math.log(q))
    if kind is not None:
        return None
    r = math.sqrt(q) * abs(u)
    if r <= 1:
        return None
    return (r - 1) ** (2 * g) / ((1 + abs(u)) * (1 + q * abs(u)))


def envelope_prefilter(q: int, s: complex, B: float, g: int) -> bool:
    """False when no field of genus g can satisfy |zeta*_K(s)| <= B."""
    lower = envelope_lower(q, s, g)
    return lower is None or lower <= B


def _special_values(q: int, s: complex, coeffs: np.ndarray, plain_central: bool) -> Tuple[np.ndarray, np.ndarray]:
    """(order, |leading|) for every row of L coefficients."""
    g = (coeffs.shape[1] - 1) // 2
    logq = math.log(q)
    u = cmath.exp(-complex(s) * logq)
    kind = point_kind(q, u)
    count = coeffs.shape[0]
    if kind == "one":
        h = coeffs.sum(axis=1)
        return np.full(count, -1), h / ((q - 1) * logq)
    if kind == "inv_q":
        h = coeffs.sum(axis=1)
        return np.full(count, -1), h * float(q) ** -g / ((1 - 1 / q) * logq)

    powers = np.array([u ** k for k in range(coeffs.shape[1])], dtype=complex)
    den = (1 - u) * (1 - q * u)
    values = coeffs.astype(complex) @ powers / den
    orders = np.zeros(count, dtype=np.int64)
    leading = np.abs(values)
    if kind is not None and plain_central:
        return orders, leading
    scale = np.abs(coeffs) @ (abs(u) ** np.arange(coeffs.shape[1]))
    suspect = np.nonzero(np.abs(values * den) <= settings.analytic_rtol * scale)[0]
    if kind is not None:
        suspect = np.arange(count)
    for i in suspect:
        sv = zeta_special_value(LPolynomial(q=q, genus=g, coeffs=coeffs[i].tolist()), s)
        orders[i] = sv.order
        leading[i] = abs(sv.leading)
    return orders, leading


def compute_S(
    q: int,
    s: complex,
    B: float,
    scope: EnumerationScope,
    plain_central: bool = False,
    threads: Optional[int] = None,
) -> NorthcottReport:
    """
    Members of S_{q,s,B} within the scope, with completeness certification.

    In the Northcott region the genus range is set to [genus_min, genus_cap]
    and the report is complete when every genus from 0 to the cap was
    exhausted. Budget exhaustion truncates the run and is reported in the
    caveat rather than raised.
    """
    if B <= 0:
        raise ValueError(f"B must be positive, got {B}")
    spec = field_of_order(q)
    if spec.p == 2:
        raise EvenCharacteristic(f"hyperelliptic enumeration needs odd q, got {q}")
    s = complex(s)
    verdict = classify_point(q, s)
    caveats = [SCOPE_CAVEAT]
    cap: Optional[int] = None
    top = scope.genus_max
    if verdict.kind is RegionKind.NORTHCOTT:
        cap = genus_cap(q, s, B)
        top = cap
        logger.info(f"Northcott point ({verdict.provenance}): genus cap {cap} for B={B}")
    if top > settings.genus_max_cap:
        caveats.append(f"genus range cut at the configured cap {settings.genus_max_cap} (wanted {top})")
        top = settings.genus_max_cap

    rows_out: List[NorthcottRow] = []
    skipped: List[int] = []
    orbits: Set[Tuple[int, int]] = set()
    lpolys: Set[Tuple[int, ...]] = set()
    used = 0
    exhausted = top
    for g in range(scope.genus_min, top + 1):
        if not envelope_prefilter(q, s, B, g):
            skipped.append(g)
            continue
        used += q ** (2 * g + 1)
        if used > scope.budget:
            caveats.append(f"budget {scope.budget} exhausted before genus {g}")
            exhausted = g - 1
            logger.warning(f"Budget exhausted at genus {g}; report is partial")
            break
        rows, coeffs, reps = _genus_block(spec, g, scope.dedupe, threads)
        orders, leading = _special_values(q, s, coeffs, plain_central)
        inside = leading <= B
        for row, c, order, value, member, rep in zip(rows.tolist(), coeffs.tolist(), orders, leading, inside, reps):
            entry = NorthcottRow(
                D=str(Poly(spec, tuple(row))),
                genus=g,
                h=int(sum(c)),
                order=int(order),
                abs_leading=float(value),
                in_S=bool(member),
            )
            rows_out.append(entry)
            if member:
                orbits.add((g, int(rep)))
                lpolys.add(tuple(c))
        logger.info(f"Genus {g}: {int(inside.sum())} of {len(rows)} fields in S")

    complete = cap is not None and scope.genus_min == 0 and exhausted >= cap and top >= cap
    if cap is None:
        caveats.append("no genus cap applies at this point; membership is reported for the scanned genera only")
    members = [r for r in rows_out if r.in_S]
    return NorthcottReport(
        q=q,
        s=s,
        B=B,
        members=members,
        rows=rows_out,
        complete_within_scope=complete,
        scope_caveat="; ".join(caveats),
        genus_cap_used=cap,
        genera_skipped=skipped,
        class_count_upper=len(orbits),
        class_count_lower=len(lpolys),
        curves_evaluated=len(rows_out),
    )


# ==================== CENTRAL ZEROS ====================

def central_zero_mask(q: int, coeffs: np.ndarray) -> np.ndarray:
    """
    Exact test of L(q^-1/2) = 0 for every row of L coefficients.

    For non-square q, L(q^-1/2) = A + B q^-1/2 with A, B rational, and both
    parts vanish; scaled by q^g they are integers. For q = r^2 the value
    r^(2g) L(1/r) is an integer.
    """
    g = (coeffs.shape[1] - 1) // 2
    k = np.arange(2 * g + 1)
    r = math.isqrt(q)
    if r * r == q:
        weights = np.array([r ** (2 * g - i) for i in k], dtype=object)
        return (coeffs.astype(object) @ weights) == 0
    even = np.array([q ** (g - i // 2) if i % 2 == 0 else 0 for i in k], dtype=object)
    odd = np.array([q ** (g - (i - 1) // 2) if i % 2 else 0 for i in k], dtype=object)
    c = coeffs.astype(object)
    return ((c @ even) == 0) & ((c @ odd) == 0)


def central_zero_search(
    q: int,
    max_deg: int,
    budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> CentralZeroReport:
    """
    Every D in H_n, n odd <= max_deg, with L(q^-1/2, chi_D) = 0.

    Candidates from the integer test are re-verified by exact division and
    a high-precision evaluation before being reported.
    """
    if q % 4 != 1:
        raise WrongCongruence(f"q = {q} is not 1 mod 4")
    budget = settings.enumeration_budget if budget is None else budget
    degrees = list(range(1, max_deg + 1, 2))
    requested = sum(q ** n for n in degrees)
    if requested > budget:
        raise BudgetExceeded(requested, budget, "monic polynomials")
    spec = field_of_order(q)
    witnesses: List[Witness] = []
    searched = 0
    for n in degrees:
        g = (n - 1) // 2
        rows, coeffs, _ = _genus_block(spec, g, DedupeMode.RAW, threads)
        searched += len(rows)
        if g == 0:
            continue
        for i in np.nonzero(central_zero_mask(q, coeffs))[0]:
            L = LPolynomial(q=q, genus=g, coeffs=coeffs[i].tolist())
            if central_value_is_zero(L):
                witnesses.append(Witness(
                    D=str(Poly(spec, tuple(rows[i].tolist()))),
                    genus=g,
                    value=None,
                    exact_zero=True,
                    property=WitnessProperty.CENTRAL_ZERO,
                ))
        logger.info(f"Degree {n}: {len(witnesses)} central zeros so far in {searched} fields")
    return CentralZeroReport(
        q=q,
        max_deg=max_deg,
        witnesses=witnesses,
        verified_empty=not witnesses,
        curves_searched=searched,
    )


# ==================== WITNESSES ====================

def member_witnesses(report: NorthcottReport) -> List[Witness]:
    return [
        Witness(D=row.D, genus=row.genus, value=complex(row.abs_leading), property=WitnessProperty.MEMBER_OF_S)
        for row in report.members
    ]


def verify_witness(
    witness: Witness,
    spec: FieldSpec,
    s: Optional[complex] = None,
    B: Optional[float] = None,
    plain_central: bool = False,
) -> bool:
    """Recompute the witnessed property from D alone."""
    curve = make_curve(parse_poly(witness.D, spec))
    if curve.genus != witness.genus:
        return False
    L = lpoly_from_charsum(curve)
    if witness.property is WitnessProperty.CENTRAL_ZERO:
        return central_value_is_zero(L)
    if s is None or B is None:
        raise ValueError("membership witnesses need s and B to verify")
    _, leading = _special_values(spec.q, s, np.array([L.coeffs], dtype=np.int64), plain_central)
    value = float(leading[0])
    if witness.value is not None and not math.isclose(value, abs(witness.value), rel_tol=1e-9, abs_tol=1e-12):
        return False
    return value <= B
