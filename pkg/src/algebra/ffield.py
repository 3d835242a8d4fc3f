"""Exact arithmetic and enumeration for the finite field F_q, q = p^e.

Elements are stored as integer codes: the coordinate vector (a_0, ..., a_{e-1})
in the power basis of the modulus is packed as sum(a_i * p**i). The prime
subfield therefore keeps its natural codes 0..p-1 and enumeration in code
order is lexicographic on coordinate vectors read from the highest power
down (constant coordinate last), the same convention used for polynomials.
"""
import itertools
from functools import lru_cache
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, List, Optional, Sequence, Tuple

from loguru import logger

from src.config import settings
from src.errors import (
    DegreeMismatch,
    DivisionByZero,
    EvenCharacteristic,
    FieldMismatch,
    InvalidPrimePower,
    NonPrime,
    ReducibleModulus,
)

MAX_PRIME = 2 ** 31
MAX_ORDER = 2 ** 63


def is_prime(n: int) -> bool:
    """Trial-division primality test (fine for n < 2^31)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power_decomposition(q: int) -> Optional[Tuple[int, int]]:
    """Return (p, e) with q = p^e and p prime < 2^31, or None."""
    if q < 2:
        return None
    for e in range(1, q.bit_length() + 1):
        p = q if e == 1 else round(q ** (1.0 / e))
        for cand in (p - 1, p, p + 1):
            if cand >= 2 and cand ** e == q and cand < MAX_PRIME and is_prime(cand):
                return cand, e
    return None


# ==================== F_p[x] HELPERS (modulus handling) ====================

def _fp_strip(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_rem(a: List[int], m: Sequence[int], p: int) -> List[int]:
    a = _fp_strip(list(a))
    dm = len(m) - 1
    inv_lc = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lc % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _fp_strip(a)
    return a


def _fp_mulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> List[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _fp_rem(prod, m, p)


def _fp_sub(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _fp_strip(out)


def _fp_gcd(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    a, b = _fp_strip(list(a)), _fp_strip(list(b))
    while b:
        a, b = b, _fp_rem(a, b, p)
    return a


def _fp_inverse(a: Sequence[int], m: Sequence[int], p: int) -> List[int]:
    """Inverse of a modulo m over F_p by the extended Euclidean algorithm."""
    r0, r1 = _fp_strip(list(m)), _fp_strip(list(a))
    s0, s1 = [], [1]
    while r1:
        # one division step r0 = qt * r1 + rem
        qt = [0] * max(len(r0) - len(r1) + 1, 1)
        rem = list(r0)
        inv_lc = pow(r1[-1], -1, p)
        while len(rem) >= len(r1) and rem:
            c = rem[-1] * inv_lc % p
            shift = len(rem) - len(r1)
            qt[shift] = c
            for i, ri in enumerate(r1):
                rem[shift + i] = (rem[shift + i] - c * ri) % p
            _fp_strip(rem)
        prod = [0] * (len(qt) + len(s1))
        for i, qi in enumerate(qt):
            for j, sj in enumerate(s1):
                prod[i + j] = (prod[i + j] + qi * sj) % p
        r0, r1 = r1, rem
        s0, s1 = s1, _fp_sub(s0, prod, p)
    # r0 is a nonzero constant when a is invertible
    c = pow(r0[0], -1, p)
    return [x * c % p for x in s0]


def _fp_is_irreducible(m: Sequence[int], p: int) -> bool:
    """Ben-Or test: no factor of degree <= deg(m)/2 over F_p."""
    e = len(m) - 1
    if e <= 1:
        return e == 1
    x = [0, 1]
    xp = list(x)
    for _ in range(e // 2):
        # xp <- xp^p mod m
        acc, base, k = [1], xp, p
        while k:
            if k & 1:
                acc = _fp_mulmod(acc, base, m, p)
            base = _fp_mulmod(base, base, m, p)
            k >>= 1
        xp = acc
        g = _fp_gcd(m, _fp_sub(xp, x, p), p)
        if len(g) > 1:
            return False
    return True


def default_modulus(p: int, e: int) -> Tuple[int, ...]:
    """Lowest monic irreducible of degree e in lexicographic order (leading coefficients first)."""
    if e == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=e):
        cand = list(reversed(tail)) + [1]
        if cand[0] != 0 and _fp_is_irreducible(cand, p):
            return tuple(cand)
    raise ReducibleModulus(f"no irreducible polynomial of degree {e} over F_{p}")  # unreachable


# ==================== FIELD SPEC ====================

@dataclass(frozen=True)
class FieldSpec:
    """The finite field F_q, q = p^e, presented as F_p[x]/(modulus)."""

    p: int
    e: int
    modulus: Tuple[int, ...]
    _log: Optional[List[int]] = field(default=None, init=False, repr=False, compare=False, hash=False)
    _exp: Optional[List[int]] = field(default=None, init=False, repr=False, compare=False, hash=False)
    _eta: Optional[List[int]] = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        q = self.q
        if self.e > 1 and q <= settings.field_table_limit:
            log, exp = _build_log_tables(self.p, self.e, self.modulus)
            object.__setattr__(self, "_log", log)
            object.__setattr__(self, "_exp", exp)
        if self.p != 2 and q <= settings.field_table_limit:
            eta = [-1] * q
            eta[0] = 0
            for a in range(1, q):
                eta[self.mul(a, a)] = 1
            object.__setattr__(self, "_eta", eta)

    @property
    def q(self) -> int:
        return self.p ** self.e

    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    def __str__(self) -> str:
        return f"F_{self.q}"

    # ----- coordinates -----

    def coords(self, a: int) -> Tuple[int, ...]:
        """Coordinate vector (a_0, ..., a_{e-1}) of the element with code a."""
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def from_coords(self, coords: Sequence[int]) -> int:
        if len(coords) > self.e:
            raise DegreeMismatch(f"{len(coords)} coordinates given for a degree-{self.e} field")
        code = 0
        for c in reversed(coords):
            code = code * self.p + (c % self.p)
        return code

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime subfield."""
        return n % self.p

    # ----- arithmetic on codes -----

    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.e == 1:
            return (a + b) % p
        out, mult = 0, 1
        while a or b:
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * mult
            mult *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if self.e == 1:
            return -a % p
        out, mult = 0, 1
        while a:
            a, ra = divmod(a, p)
            out += (-ra % p) * mult
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        prod = _fp_mulmod(self.coords(a), self.coords(b), self.modulus, self.p)
        return self.from_coords(prod)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"zero has no inverse in {self}")
        if self.e == 1:
            return pow(a, -1, self.p)
        return self.from_coords(_fp_inverse(_fp_strip(list(self.coords(a))), self.modulus, self.p))

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        """Square-and-multiply; negative exponents go through the inverse."""
        if k < 0:
            a, k = self.inv(a), -k
        if self.e == 1:
            return pow(a, k, self.p)
        result = 1
        while k:
            if k & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            k >>= 1
        return result

    def eta(self, a: int) -> int:
        """Quadratic character of F_q on codes: 0, +1 or -1."""
        if self.p == 2:
            raise EvenCharacteristic(f"quadratic character undefined in characteristic 2 ({self})")
        if self._eta is not None:
            return self._eta[a]
        if a == 0:
            return 0
        return 1 if self.pow(a, (self.q - 1) // 2) == 1 else -1

    def sqrt_inverse_frobenius(self, a: int) -> int:
        """The unique b with b^p = a (Frobenius is bijective on F_q)."""
        return self.pow(a, self.q // self.p)

    def element(self, code: int) -> "FieldElement":
        return FieldElement(self, code % self.q if self.e == 1 else code)


def _build_log_tables(p: int, e: int, modulus: Tuple[int, ...]) -> Tuple[List[int], List[int]]:
    """Discrete log/exp tables from the first primitive element found in code order."""
    q = p ** e

    def to_coords(a):
        out = []
        for _ in range(e):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def from_coords(c):
        code = 0
        for x in reversed(c):
            code = code * p + x
        return code

    for g in range(2, q):
        exp = [1] * (q - 1)
        cur = [1]
        gc = _fp_strip(to_coords(g))
        ok = True
        for i in range(1, q - 1):
            cur = _fp_mulmod(cur, gc, modulus, p)
            code = from_coords(cur)
            if code == 1:
                ok = False
                break
            exp[i] = code
        if ok:
            log = [0] * q
            for i, code in enumerate(exp):
                log[code] = i
            logger.debug(f"Built log tables for F_{q} with generator code {g}")
            return log, exp
    raise ReducibleModulus(f"no primitive element found for F_{q}")  # unreachable for a field


# ==================== ELEMENTS ====================

@dataclass(frozen=True)
class FieldElement:
    """An element of a FieldSpec; immutable value type."""

    spec: FieldSpec
    code: int

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self.spec.coords(self.code)

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement) or other.spec != self.spec:
            raise FieldMismatch(f"cannot combine elements of {self.spec} and {getattr(other, 'spec', other)}")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.add(self.code, other.code))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.sub(self.code, other.code))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.mul(self.code, other.code))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.div(self.code, other.code))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.neg(self.code))

    def __pow__(self, k: int) -> "FieldElement":
        return FieldElement(self.spec, self.spec.pow(self.code, k))

    def is_zero(self) -> bool:
        return self.code == 0

    def __str__(self) -> str:
        if self.spec.e == 1:
            return str(self.code)
        return "[" + ",".join(str(c) for c in self.coeffs) + "]"


class SquareClass(str, Enum):
    ZERO = "zero"
    SQUARE = "square"
    NONSQUARE = "nonsquare"


# ==================== OPERATIONS ====================

def field_make(p: int, e: int = 1, modulus: Optional[Sequence[int]] = None) -> FieldSpec:
    """
    Build and validate a finite field.

    Args:
        p: Characteristic, a prime below 2^31
        e: Extension degree
        modulus: Optional monic defining polynomial over F_p, constant term first

    Returns:
        A validated FieldSpec
    """
    if not is_prime(p) or p >= MAX_PRIME:
        raise NonPrime(f"{p} is not a prime below 2^31")
    if e < 1:
        raise DegreeMismatch(f"extension degree must be >= 1, got {e}")
    if p ** e >= MAX_ORDER:
        raise DegreeMismatch(f"q = {p}^{e} does not fit in 64 bits")
    if modulus is None:
        mod = default_modulus(p, e)
    else:
        mod = tuple(int(c) % p for c in modulus)
        while mod and mod[-1] == 0:
            mod = mod[:-1]
        if len(mod) - 1 != e:
            raise DegreeMismatch(f"modulus has degree {len(mod) - 1}, expected {e}")
        if mod[-1] != 1:
            raise DegreeMismatch("modulus must be monic")
        if not _fp_is_irreducible(list(mod), p):
            raise ReducibleModulus(f"modulus {mod} is reducible over F_{p}")
    return _cached_spec(p, e, mod)


@lru_cache(maxsize=64)
def _cached_spec(p: int, e: int, modulus: Tuple[int, ...]) -> FieldSpec:
    spec = FieldSpec(p, e, modulus)
    logger.debug(f"Constructed {spec} with modulus {modulus}")
    return spec


def fe_arith(a: FieldElement, b: FieldElement, op: str, k: Optional[int] = None) -> FieldElement:
    """Apply one of add, sub, mul, div, pow (pow uses k; b is ignored)."""
    if op == "pow":
        if k is None:
            raise ValueError("pow needs an exponent")
        return a ** k
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown field operation {op!r}")


def fe_is_square(a: FieldElement) -> SquareClass:
    """Euler criterion a^((q-1)/2) in F_q."""
    value = a.spec.eta(a.code)
    if value == 0:
        return SquareClass.ZERO
    return SquareClass.SQUARE if value == 1 else SquareClass.NONSQUARE


def fe_enumerate(spec: FieldSpec) -> Iterator[FieldElement]:
    """All q elements in code order, zero first."""
    for code in range(spec.q):
        yield FieldElement(spec, code)


def field_of_order(q: int) -> FieldSpec:
    """F_q with the default modulus."""
    pe = prime_power_decomposition(q)
    if pe is None:
        raise InvalidPrimePower(f"q = {q} is not a prime power")
    return field_make(*pe)
