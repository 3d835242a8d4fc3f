"""Exception hierarchy with stable, machine-readable error codes."""
from typing import Any, Dict, Optional


class FFZetaError(Exception):
    """Base class for every error raised by ffzeta."""

    code = "FFZETA_ERROR"

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable form used by the CLI error object."""
        return {"error": self.code, "message": str(self)}


# ==================== FIELDS ====================

class NonPrime(FFZetaError, ValueError):
    code = "NON_PRIME"


class ReducibleModulus(FFZetaError, ValueError):
    code = "REDUCIBLE_MODULUS"


class DegreeMismatch(FFZetaError, ValueError):
    code = "DEGREE_MISMATCH"


class DivisionByZero(FFZetaError, ZeroDivisionError):
    code = "DIVISION_BY_ZERO"


class FieldMismatch(FFZetaError, ValueError):
    code = "FIELD_MISMATCH"


class EvenCharacteristic(FFZetaError, ValueError):
    code = "EVEN_CHARACTERISTIC"


class InvalidPrimePower(FFZetaError, ValueError):
    code = "INVALID_PRIME_POWER"


# ==================== POLYNOMIALS ====================

class ZeroPolynomial(FFZetaError, ValueError):
    code = "ZERO_POLYNOMIAL"


class NonMonic(FFZetaError, ValueError):
    code = "NON_MONIC"


class TrivialCharacter(FFZetaError, ValueError):
    code = "TRIVIAL_CHARACTER"


class DegreeOutOfRange(FFZetaError, ValueError):
    code = "DEGREE_OUT_OF_RANGE"


# ==================== ENUMERATION ====================

class BudgetExceeded(FFZetaError):
    code = "BUDGET_EXCEEDED"

    def __init__(self, requested: int, budget: int, what: str = "objects"):
        self.requested = requested
        self.budget = budget
        super().__init__(f"enumerating {requested} {what} exceeds budget {budget}")


# ==================== ZETA FUNCTIONS ====================

class InvalidCurve(FFZetaError, ValueError):
    code = "INVALID_CURVE"


class InsufficientCounts(FFZetaError, ValueError):
    code = "INSUFFICIENT_COUNTS"


class PoleAt(FFZetaError, ValueError):
    code = "POLE_AT"

    def __init__(self, s: complex):
        self.s = s
        super().__init__(f"zeta has a pole at s={s}")


class NonPositiveClassNumber(FFZetaError):
    code = "NON_POSITIVE_CLASS_NUMBER"


class ConsistencyError(FFZetaError):
    code = "CONSISTENCY_ERROR"


# ==================== BOUNDS / MOMENTS ====================

class OutsideNorthcottRegion(FFZetaError, ValueError):
    code = "OUTSIDE_NORTHCOTT_REGION"


class SigmaNotGreaterThanOne(FFZetaError, ValueError):
    code = "SIGMA_NOT_GREATER_THAN_ONE"


class DivergentParameter(FFZetaError, ValueError):
    code = "DIVERGENT_PARAMETER"


class PoleInPrediction(FFZetaError, ValueError):
    code = "POLE_IN_PREDICTION"


class WrongCongruence(FFZetaError, ValueError):
    code = "WRONG_CONGRUENCE"


# ==================== FRONT END ====================

class ParseError(FFZetaError, ValueError):
    code = "PARSE_ERROR"

    def __init__(self, message: str, text: str = "", position: Optional[int] = None):
        self.text = text
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}: {text!r}" if text else f"{message}{where}")

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["position"] = self.position
        return data


class UsageError(FFZetaError, ValueError):
    code = "USAGE_ERROR"

    def __init__(self, message: str, flag: Optional[str] = None):
        self.flag = flag
        super().__init__(f"{flag}: {message}" if flag else message)
