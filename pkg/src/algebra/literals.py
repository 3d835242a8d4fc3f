"""Parsers for the field, polynomial and complex literal syntax."""
import math
import re
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

from src.algebra.ffield import FieldSpec, field_make, prime_power_decomposition
from src.algebra.polyring import Poly
from src.errors import InvalidPrimePower, ParseError

_INT = re.compile(r"\d+")
_FIELD = re.compile(r"^(?:q=)?(\d+)(?:\^(\d+))?$")
_REAL = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(
    rf"^(?:(?P<re>{_REAL})(?P<im>[+-](?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)i"
    rf"|(?P<only_im>{_REAL}|[+-]?)i|(?P<only_re>{_REAL}))$"
)
_FRACTION = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")

# field orders are machine words
_MAX_FIELD_BITS = 63
_MAX_FIELD_DIGITS = 19


def parse_field(text: str, modulus: Optional[str] = None) -> FieldSpec:
    """
    Parse `q=p^e`, `q=9` or a bare prime power, with an optional modulus literal.

    Args:
        text: Field literal
        modulus: Polynomial literal over F_p for the defining polynomial

    Returns:
        The validated FieldSpec
    """
    compact = "".join(text.split())
    m = _FIELD.match(compact)
    if not m:
        raise ParseError("malformed field literal", text, 0)
    base_text, exp_text = m.group(1), m.group(2) or "1"
    if len(base_text) > _MAX_FIELD_DIGITS or len(exp_text) > _MAX_FIELD_DIGITS:
        raise InvalidPrimePower(f"{compact} is too large for a field order")
    base, exp = int(base_text), int(exp_text)
    if base >= 2 and exp * math.log2(base) >= _MAX_FIELD_BITS:
        raise InvalidPrimePower(f"{base}^{exp} is not below 2^{_MAX_FIELD_BITS}")
    decomposition = prime_power_decomposition(base ** exp)
    if decomposition is None:
        raise InvalidPrimePower(f"{base ** exp} is not a prime power")
    p, e = decomposition
    mod = None
    if modulus is not None:
        prime_field = field_make(p, 1)
        mod = parse_poly(modulus, prime_field).codes
    return field_make(p, e, mod)


def _parse_coefficient(spec: FieldSpec, s: str, pos: int) -> Tuple[int, int]:
    """Return (code, new position) for an integer or bracketed coordinate vector."""
    if s[pos] == "[":
        end = s.find("]", pos)
        if end < 0:
            raise ParseError("unterminated coordinate vector", s, pos)
        parts = s[pos + 1:end].split(",")
        coords = []
        for part in parts:
            if not _INT.fullmatch(part):
                raise ParseError("bad coordinate", s, pos)
            value = int(part)
            if value >= spec.p:
                raise ParseError(f"coordinate {value} not in [0, {spec.p})", s, pos)
            coords.append(value)
        if len(coords) > spec.e:
            raise ParseError(f"{len(coords)} coordinates for a degree-{spec.e} field", s, pos)
        return spec.from_coords(coords), end + 1
    m = _INT.match(s, pos)
    if not m:
        raise ParseError("expected a coefficient", s, pos)
    value = int(m.group())
    if value >= spec.p:
        raise ParseError(f"coefficient {value} not in [0, {spec.p})", s, pos)
    return value, m.end()


def _parse_monomial(s: str, pos: int) -> Tuple[int, int]:
    if pos >= len(s) or s[pos] != "T":
        raise ParseError("expected T", s, pos)
    pos += 1
    if pos < len(s) and s[pos] == "^":
        m = _INT.match(s, pos + 1)
        if not m:
            raise ParseError("expected an exponent", s, pos + 1)
        return int(m.group()), m.end()
    return 1, pos


def parse_poly(text: str, spec: FieldSpec) -> Poly:
    """
    Parse a polynomial literal such as `T^3+4*T` or `[1,2]*T^2+[0,1]`.

    Whitespace is ignored; positions in errors refer to the text with
    whitespace removed. Repeated monomials are summed and `-` negates the
    following term.
    """
    s = "".join(text.split())
    if not s:
        raise ParseError("empty polynomial literal", text, 0)
    terms: Dict[int, int] = {}
    pos = 0
    sign = 1
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        pos = 1
    while True:
        if pos >= len(s):
            raise ParseError("dangling operator", s, pos)
        if s[pos] == "T":
            coef = 1
            power, pos = _parse_monomial(s, pos)
        else:
            coef, pos = _parse_coefficient(spec, s, pos)
            power = 0
            if pos < len(s) and s[pos] == "*":
                power, pos = _parse_monomial(s, pos + 1)
        if sign < 0:
            coef = spec.neg(coef)
        terms[power] = spec.add(terms.get(power, 0), coef)
        if pos == len(s):
            break
        if s[pos] not in "+-":
            raise ParseError(f"unexpected character {s[pos]!r}", s, pos)
        sign = -1 if s[pos] == "-" else 1
        pos += 1
    degree = max(terms)
    codes = [terms.get(k, 0) for k in range(degree + 1)]
    return Poly(spec, tuple(codes))


def parse_complex(text: str) -> complex:
    """Parse `a+bi`, `bi` or a plain real (optional exponents)."""
    s = "".join(text.split())
    m = _COMPLEX.match(s)
    if not m:
        raise ParseError("malformed complex literal", text, 0)
    if m.group("only_re") is not None:
        value = complex(float(m.group("only_re")), 0.0)
    elif m.group("re") is not None:
        im = m.group("im")
        im = im + "1" if im in ("+", "-") else im
        value = complex(float(m.group("re")), float(im))
    else:
        im = m.group("only_im")
        im = (im or "+") + "1" if im in ("", "+", "-") else im
        value = complex(0.0, float(im))
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ParseError("complex literal must be finite", text, 0)
    return value


def parse_real(text: str) -> Union[Fraction, float]:
    """An exact Fraction for integer or p/q input, otherwise a float."""
    s = "".join(text.split())
    m = _FRACTION.match(s)
    if m:
        den = int(m.group(2) or 1)
        if den == 0:
            raise ParseError("zero denominator", text, s.index("/") + 1)
        return Fraction(int(m.group(1)), den)
    try:
        value = float(s)
    except ValueError:
        raise ParseError("malformed real literal", text, 0) from None
    if not math.isfinite(value):
        raise ParseError("real literal must be finite", text, 0)
    return value


def format_complex(z: complex) -> str:
    if z.imag == 0:
        return repr(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"
