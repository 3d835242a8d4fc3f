"""Pydantic models for computed records and reports."""
from enum import Enum
from typing import Annotated, Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator


def _to_complex(value: Any) -> complex:
    if isinstance(value, dict):
        return complex(float(value["re"]), float(value["im"]))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def _complex_dict(value: complex) -> Dict[str, float]:
    return {"re": value.real, "im": value.imag}


# complex numbers travel as {"re": x, "im": y}
ComplexValue = Annotated[complex, PlainValidator(_to_complex), PlainSerializer(_complex_dict, return_type=dict)]


class FFModel(BaseModel):
    """Base model for records with extra fields ignored."""
    model_config = ConfigDict(extra='ignore', arbitrary_types_allowed=True)


# ==================== ZETA FUNCTIONS ====================

class LPolynomial(FFModel):
    """Integer numerator L(u) = c_0 + c_1 u + ... + c_2g u^2g of a zeta function."""
    q: int
    genus: int
    coeffs: List[int]

    def __call__(self, u: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * u + c
        return acc


class PrimeCounts(FFModel):
    """a_d = number of degree-d primes of K, for d <= max_deg."""
    q: int
    max_deg: int
    a: Dict[int, int] = Field(default_factory=dict)


class SpecialValue(FFModel):
    """Leading Taylor coefficient of zeta at s and the vanishing order (negative = pole)."""
    at: ComplexValue
    order: int
    leading: ComplexValue
    order_confidence: Literal["exact", "numeric"] = "exact"


class WeilReport(FFModel):
    funceq: bool
    rh: bool
    max_root_deviation: float
    root_moduli: List[float] = Field(default_factory=list)


class CurveRecord(FFModel):
    """Per-curve record emitted by the lpoly subcommand."""
    q: int
    D: str
    genus: int
    L: List[int]
    h: int
    rh_ok: bool
    funceq_ok: bool
    central_zero: bool


class SeriesCheck(FFModel):
    """A truncated series or product compared against its bound or limit."""
    name: str
    value: float
    reference: float
    truncation_deg: int
    ok: bool


# ==================== BOUNDS ====================

class RegionKind(str, Enum):
    NORTHCOTT = "Northcott"
    NON_NORTHCOTT_LARGE_B = "NonNorthcottLargeB"
    NON_NORTHCOTT_ALL_B = "NonNorthcottAllB"
    CENTRAL_LINE_ZETA_VANISHING = "CentralLineZetaVanishing"
    NO_RESULT = "NoResult"


class RegionVerdict(FFModel):
    kind: RegionKind
    threshold_B: Optional[float] = None
    provenance: str
    assumptions: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)


class BoundReport(FFModel):
    """A bound value; log_value (natural log) is always set, value only when it fits a float."""
    name: str
    value: Optional[float] = None
    log_value: float
    log_q_value: float
    log_scale: bool = False
    exact: Optional[str] = None
    effective: bool = True
    provenance: str = ""


class RegionGridRow(FFModel):
    q: int
    sigma: float
    tau: float
    kind: RegionKind
    provenance: str
    threshold_B: Optional[float] = None


# ==================== NORTHCOTT ====================

class DedupeMode(str, Enum):
    RAW = "raw"
    AFFINE_ORBIT = "affine_orbit"
    BY_LPOLYNOMIAL = "by_lpolynomial"


class EnumerationScope(FFModel):
    q: int
    genus_min: int = 0
    genus_max: int = 1
    dedupe: DedupeMode = DedupeMode.RAW
    budget: int = 2_000_000


class NorthcottRow(FFModel):
    """One evaluated curve; in_S marks membership."""
    D: str
    genus: int
    h: int
    order: int
    abs_leading: float
    in_S: bool


class NorthcottReport(FFModel):
    q: int
    s: ComplexValue
    B: float
    members: List[NorthcottRow] = Field(default_factory=list)
    rows: List[NorthcottRow] = Field(default_factory=list)
    complete_within_scope: bool = False
    scope_caveat: str = ""
    genus_cap_used: Optional[int] = None
    genera_skipped: List[int] = Field(default_factory=list)
    class_count_upper: int = 0
    class_count_lower: int = 0
    curves_evaluated: int = 0


class WitnessProperty(str, Enum):
    MEMBER_OF_S = "member_of_S"
    CENTRAL_ZERO = "central_zero"


class Witness(FFModel):
    D: str
    genus: int
    value: Optional[ComplexValue] = None
    exact_zero: bool = False
    property: WitnessProperty


class CentralZeroReport(FFModel):
    q: int
    max_deg: int
    witnesses: List[Witness] = Field(default_factory=list)
    verified_empty: bool = False
    curves_searched: int = 0


# ==================== MOMENTS ====================

class CAlphaResult(FFModel):
    value: float
    tail_note: str
    tail_bound: float
    truncation_deg: int


class MomentReport(FFModel):
    q: int
    g: int
    alpha: ComplexValue
    empirical: float
    predicted: float
    truncation_deg: int
    tail_flag: str
    ratio: float
    curves: int
    error_scale: Optional[float] = None


class AFEResult(FFModel):
    lhs: float
    rhs: float
    ok: bool


class CharsumCheck(FFModel):
    lhs: float
    rhs: float
    ok: bool


class SquareAverage(FFModel):
    empirical: float
    main_term: float
    error: float
    error_bound: float
    ok: bool


# ==================== FRONT END RECORDS ====================

class FieldSummary(FFModel):
    q: int
    p: int
    e: int
    modulus: str
    squares: int
    generator: Optional[str] = None


class FactorRecord(FFModel):
    prime: str
    degree: int
    exponent: int


class PolyReport(FFModel):
    """Factorization and arithmetic functions of one polynomial."""
    poly: str
    degree: int
    unit: str
    factors: List[FactorRecord] = Field(default_factory=list)
    squarefree: bool
    irreducible: bool
    mobius: Optional[int] = None
    von_mangoldt: Optional[int] = None
    divisor_count: Optional[int] = None


class ZetaReport(FFModel):
    D: str
    genus: int
    s: ComplexValue
    value: Optional[ComplexValue] = None
    xi: Optional[ComplexValue] = None
    special: SpecialValue


class GenusCap(FFModel):
    """Largest genus compatible with |zeta*_K(s)| <= B."""
    q: int
    s: ComplexValue
    B: float
    genus_cap: int
    provenance: str
