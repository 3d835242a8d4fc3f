"""Exact arithmetic, factorization and quadratic characters in F_q[T].

Polynomials are tuples of field codes, constant term first, with no trailing
zeros. The low-level kernels below work on plain lists of codes and take the
FieldSpec explicitly; the Poly value type wraps them.
"""
import itertools
import random
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from loguru import logger

from src.config import settings
from src.algebra.ffield import FieldElement, FieldSpec
from src.errors import (
    BudgetExceeded,
    DivisionByZero,
    EvenCharacteristic,
    FieldMismatch,
    NonMonic,
    ZeroPolynomial,
)

NEG_INF = float("-inf")

Codes = List[int]


# ==================== KERNELS ====================

def _strip(a: Codes) -> Codes:
    while a and a[-1] == 0:
        a.pop()
    return a


def _add(F: FieldSpec, a: Sequence[int], b: Sequence[int]) -> Codes:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    if F.e == 1:
        p = F.p
        for i, bi in enumerate(b):
            out[i] = (out[i] + bi) % p
    else:
        for i, bi in enumerate(b):
            out[i] = F.add(out[i], bi)
    return _strip(out)


def _neg(F: FieldSpec, a: Sequence[int]) -> Codes:
    return [F.neg(c) for c in a]


def _sub(F: FieldSpec, a: Sequence[int], b: Sequence[int]) -> Codes:
    return _add(F, a, _neg(F, b))


def _scale(F: FieldSpec, a: Sequence[int], c: int) -> Codes:
    if c == 0:
        return []
    return _strip([F.mul(x, c) for x in a])


def _mul(F: FieldSpec, a: Sequence[int], b: Sequence[int]) -> Codes:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    if F.e == 1:
        p = F.p
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] = (out[i + j] + ai * bj) % p
        return _strip(out)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = F.add(out[i + j], F.mul(ai, bj))
    return _strip(out)


def _divmod(F: FieldSpec, a: Sequence[int], b: Sequence[int]) -> Tuple[Codes, Codes]:
    if not b:
        raise DivisionByZero("polynomial division by zero")
    rem = list(a)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return [], _strip(rem)
    quot = [0] * (len(rem) - db)
    inv_lc = F.inv(b[-1])
    prime = F.e == 1
    p = F.p
    for shift in range(len(rem) - 1 - db, -1, -1):
        top = rem[shift + db]
        if top == 0:
            continue
        c = top * inv_lc % p if prime else F.mul(top, inv_lc)
        quot[shift] = c
        if prime:
            for i in range(db):
                rem[shift + i] = (rem[shift + i] - c * b[i]) % p
        else:
            for i in range(db):
                if b[i]:
                    rem[shift + i] = F.sub(rem[shift + i], F.mul(c, b[i]))
        rem[shift + db] = 0
    return _strip(quot), _strip(rem[:db])


def _rem(F: FieldSpec, a: Sequence[int], b: Sequence[int]) -> Codes:
    return _divmod(F, a, b)[1]


def _monic(F: FieldSpec, a: Sequence[int]) -> Codes:
    if not a or a[-1] == 1:
        return list(a)
    return _scale(F, a, F.inv(a[-1]))


def _gcd(F: FieldSpec, a: Sequence[int], b: Sequence[int]) -> Codes:
    a, b = list(a), list(b)
    while b:
        a, b = b, _rem(F, a, b)
    return _monic(F, a)


def _derivative(F: FieldSpec, a: Sequence[int]) -> Codes:
    return _strip([F.mul(F.from_int(i), a[i]) for i in range(1, len(a))])


def _mulmod(F: FieldSpec, a: Sequence[int], b: Sequence[int], m: Sequence[int]) -> Codes:
    return _rem(F, _mul(F, a, b), m)


def _pow_mod(F: FieldSpec, a: Sequence[int], k: int, m: Sequence[int]) -> Codes:
    result: Codes = [1]
    base = _rem(F, a, m)
    while k:
        if k & 1:
            result = _mulmod(F, result, base, m)
        k >>= 1
        if k:
            base = _mulmod(F, base, base, m)
    return _rem(F, result, m)


def _eval(F: FieldSpec, a: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def _resultant(F: FieldSpec, f: Sequence[int], g: Sequence[int]) -> int:
    """Res(f, g) by the Euclidean recursion Res(g, f) = lc(g)^(deg f - deg r) Res(g, r)."""
    if not f or not g:
        return 0
    f, g = list(f), list(g)
    result = 1
    while True:
        m, n = len(f) - 1, len(g) - 1
        if n == 0:
            return F.mul(result, F.pow(g[0], m))
        if m == 0:
            return F.mul(result, F.pow(f[0], n))
        r = _rem(F, f, g)
        if not r:
            return 0
        if (m * n) & 1:
            result = F.neg(result)
        result = F.mul(result, F.pow(g[-1], m - (len(r) - 1)))
        f, g = g, r


def _pth_root(F: FieldSpec, a: Sequence[int]) -> Codes:
    """g with g^p = a, for a whose exponents are all multiples of p."""
    p = F.p
    return _strip([F.sqrt_inverse_frobenius(a[i]) for i in range(0, len(a), p)])


def _sqf_list(F: FieldSpec, f: Sequence[int]) -> List[Tuple[Codes, int]]:
    """Squarefree decomposition of a monic f in characteristic p."""
    out: List[Tuple[Codes, int]] = []
    n = 1
    f = list(f)
    while True:
        r = _derivative(F, f)
        if r:
            g = _gcd(F, f, r)
            h = _divmod(F, f, g)[0]
            i = 1
            while len(h) > 1:
                gh = _gcd(F, g, h)
                factor = _divmod(F, h, gh)[0]
                if len(factor) > 1:
                    out.append((factor, i * n))
                g = _divmod(F, g, gh)[0]
                h = gh
                i += 1
            if len(g) <= 1:
                break
            f = g
        if len(f) <= 1:
            break
        # f' == 0: f is a p-th power
        f = _pth_root(F, f)
        n *= F.p
    return out


def _ddf(F: FieldSpec, f: Sequence[int]) -> List[Tuple[Codes, int]]:
    """Distinct-degree factorization of a monic squarefree f."""
    q = F.q
    out: List[Tuple[Codes, int]] = []
    x = [0, 1]
    h = list(x)
    f = list(f)
    d = 1
    while 2 * d <= len(f) - 1:
        h = _pow_mod(F, h, q, f)
        g = _gcd(F, f, _sub(F, h, x))
        if len(g) > 1:
            out.append((g, d))
            f = _divmod(F, f, g)[0]
            h = _rem(F, h, f)
        d += 1
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _edf(F: FieldSpec, f: Codes, d: int, rng: random.Random) -> List[Codes]:
    """Equal-degree splitting of a monic product of degree-d irreducibles."""
    n = len(f) - 1
    if n == d:
        return [f]
    q = F.q
    while True:
        a = _strip([rng.randrange(q) for _ in range(n)])
        if len(a) <= 1:
            continue
        if F.p == 2:
            # trace map a + a^2 + ... + a^(2^(e d - 1))
            t = list(a)
            acc = list(a)
            for _ in range(F.e * d - 1):
                t = _mulmod(F, t, t, f)
                acc = _add(F, acc, t)
            b = acc
        else:
            b = _sub(F, _pow_mod(F, a, (q ** d - 1) // 2, f), [1])
        g = _gcd(F, f, b)
        if 1 < len(g) < len(f):
            break
    return _edf(F, g, d, rng) + _edf(F, _divmod(F, f, g)[0], d, rng)


def _ben_or(F: FieldSpec, f: Sequence[int]) -> bool:
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    x = [0, 1]
    h = list(x)
    for _ in range(n // 2):
        h = _pow_mod(F, h, F.q, f)
        if len(_gcd(F, f, _sub(F, h, x))) > 1:
            return False
    return True


def _lex_key(codes: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """Enumeration order: degree, then coefficients read from the top down."""
    return len(codes) - 1, tuple(reversed(codes))


# ==================== POLY ====================

@dataclass(frozen=True)
class Poly:
    """A polynomial in F_q[T]; codes are field codes, constant term first."""

    spec: FieldSpec
    codes: Tuple[int, ...] = ()

    def __post_init__(self):
        codes = tuple(self.codes)
        end = len(codes)
        while end and codes[end - 1] == 0:
            end -= 1
        object.__setattr__(self, "codes", codes[:end])

    # ----- constructors -----

    @classmethod
    def zero(cls, spec: FieldSpec) -> "Poly":
        return cls(spec, ())

    @classmethod
    def one(cls, spec: FieldSpec) -> "Poly":
        return cls(spec, (1,))

    @classmethod
    def t(cls, spec: FieldSpec) -> "Poly":
        return cls(spec, (0, 1))

    @classmethod
    def from_ints(cls, spec: FieldSpec, coeffs: Sequence[int]) -> "Poly":
        """Coefficients given as integers reduced into the prime subfield."""
        return cls(spec, tuple(spec.from_int(c) for c in coeffs))

    @classmethod
    def monic_from_index(cls, spec: FieldSpec, n: int, index: int) -> "Poly":
        """The index-th monic polynomial of degree n in enumeration order."""
        q = spec.q
        codes = []
        for _ in range(n):
            index, c = divmod(index, q)
            codes.append(c)
        codes.append(1)
        return cls(spec, tuple(codes))

    # ----- properties -----

    @property
    def degree(self) -> Union[int, float]:
        """Degree, with NEG_INF for the zero polynomial."""
        return len(self.codes) - 1 if self.codes else NEG_INF

    @property
    def coeffs(self) -> Tuple[FieldElement, ...]:
        return tuple(FieldElement(self.spec, c) for c in self.codes)

    @property
    def lc(self) -> int:
        return self.codes[-1] if self.codes else 0

    @property
    def norm(self) -> int:
        """|f| = q^deg f (0 for the zero polynomial)."""
        return self.spec.q ** (len(self.codes) - 1) if self.codes else 0

    @property
    def index(self) -> int:
        """Position of a monic polynomial within its degree in enumeration order."""
        if not self.is_monic():
            raise NonMonic(f"{self} is not monic")
        q = self.spec.q
        out = 0
        for c in reversed(self.codes[:-1]):
            out = out * q + c
        return out

    def is_zero(self) -> bool:
        return not self.codes

    def is_monic(self) -> bool:
        return bool(self.codes) and self.codes[-1] == 1

    def is_constant(self) -> bool:
        return len(self.codes) <= 1

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return _lex_key(self.codes)

    # ----- arithmetic -----

    def _check(self, other: "Poly") -> None:
        if not isinstance(other, Poly) or other.spec != self.spec:
            raise FieldMismatch(f"cannot combine polynomials over {self.spec} and {getattr(other, 'spec', other)}")

    def _new(self, codes: Sequence[int]) -> "Poly":
        return Poly(self.spec, tuple(codes))

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        return self._new(_add(self.spec, self.codes, other.codes))

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        return self._new(_sub(self.spec, self.codes, other.codes))

    def __neg__(self) -> "Poly":
        return self._new(_neg(self.spec, self.codes))

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        return self._new(_mul(self.spec, self.codes, other.codes))

    def __divmod__(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        self._check(other)
        quot, rem = _divmod(self.spec, self.codes, other.codes)
        return self._new(quot), self._new(rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __pow__(self, k: int) -> "Poly":
        result = Poly.one(self.spec)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c: int) -> "Poly":
        return self._new(_scale(self.spec, self.codes, c))

    def monic(self) -> "Poly":
        if self.is_zero():
            raise ZeroPolynomial("the zero polynomial has no monic associate")
        return self._new(_monic(self.spec, self.codes))

    def gcd(self, other: "Poly") -> "Poly":
        self._check(other)
        return self._new(_gcd(self.spec, self.codes, other.codes))

    def derivative(self) -> "Poly":
        return self._new(_derivative(self.spec, self.codes))

    def eval(self, x: int) -> int:
        """Value at the field element with code x."""
        return _eval(self.spec, self.codes, x)

    def compose(self, inner: "Poly") -> "Poly":
        """self(inner(T)) by Horner's rule."""
        self._check(inner)
        acc: Codes = []
        for c in reversed(self.codes):
            acc = _add(self.spec, _mul(self.spec, acc, inner.codes), [c] if c else [])
        return self._new(acc)

    def pow_mod(self, k: int, modulus: "Poly") -> "Poly":
        self._check(modulus)
        return self._new(_pow_mod(self.spec, self.codes, k, modulus.codes))

    def resultant(self, other: "Poly") -> int:
        self._check(other)
        return _resultant(self.spec, self.codes, other.codes)

    # ----- literals -----

    def __str__(self) -> str:
        return format_poly(self)


def format_poly(f: Poly) -> str:
    """Render f in the literal grammar, highest degree first (e.g. T^3+4*T)."""
    if f.is_zero():
        return "0"
    spec = f.spec
    terms = []
    for k in range(len(f.codes) - 1, -1, -1):
        c = f.codes[k]
        if c == 0:
            continue
        if spec.e == 1:
            coef = str(c)
        else:
            coef = "[" + ",".join(str(x) for x in spec.coords(c)) + "]"
        if k == 0:
            terms.append(coef)
        else:
            mono = "T" if k == 1 else f"T^{k}"
            terms.append(mono if c == 1 else f"{coef}*{mono}")
    return "+".join(terms)


# ==================== FACTORIZATION ====================

@dataclass(frozen=True)
class Factorization:
    """unit * prod(P^m) with monic irreducible P, sorted in enumeration order."""

    unit: FieldElement
    factors: Tuple[Tuple[Poly, int], ...] = field(default_factory=tuple)

    def expand(self) -> Poly:
        spec = self.unit.spec
        out = Poly(spec, (self.unit.code,))
        for prime, mult in self.factors:
            out = out * prime ** mult
        return out

    @property
    def primes(self) -> Tuple[Poly, ...]:
        return tuple(P for P, _ in self.factors)


class MonicFilter(str, Enum):
    ALL = "all"
    SQUAREFREE = "squarefree"
    IRREDUCIBLE = "irreducible"


@dataclass(frozen=True)
class IrreducibleTable:
    """Monic irreducibles of every degree up to max_deg, each list sorted."""

    spec: FieldSpec
    by_degree: Dict[int, Tuple[Poly, ...]]

    @property
    def max_deg(self) -> int:
        return max(self.by_degree) if self.by_degree else 0

    def count(self, d: int) -> int:
        return len(self.by_degree.get(d, ()))


# ==================== OPERATIONS ====================

def poly_arith(a: Poly, b: Poly, op: str):
    """Dispatch one of add, sub, mul, divmod, gcd."""
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "divmod":
        return divmod(a, b)
    if op == "gcd":
        return a.gcd(b)
    raise ValueError(f"unknown polynomial operation {op!r}")


def factor(f: Poly, seed: Optional[int] = None) -> Factorization:
    """
    Complete factorization into monic irreducibles.

    Squarefree decomposition, then distinct-degree and equal-degree
    splitting. The splitting RNG is seeded so repeated calls agree.

    Args:
        f: Nonzero polynomial
        seed: RNG seed (defaults to settings.factor_seed)

    Returns:
        Factorization with factors sorted by degree then coefficients
    """
    if f.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    F = f.spec
    unit = FieldElement(F, f.lc)
    rng = random.Random(settings.factor_seed if seed is None else seed)
    monic = _monic(F, f.codes)
    found: Dict[Tuple[int, ...], int] = {}
    for part, mult in _sqf_list(F, monic):
        for block, d in _ddf(F, part):
            for prime in _edf(F, block, d, rng):
                key = tuple(prime)
                found[key] = found.get(key, 0) + mult
    factors = tuple(
        (Poly(F, key), mult) for key, mult in sorted(found.items(), key=lambda kv: _lex_key(kv[0]))
    )
    return Factorization(unit, factors)


def is_squarefree(f: Poly) -> bool:
    """gcd(f, f') == 1, falling back to the factorization when f' vanishes."""
    if f.is_zero():
        raise ZeroPolynomial("squarefreeness of the zero polynomial is undefined")
    if f.is_constant():
        return True
    F = f.spec
    deriv = _derivative(F, f.codes)
    if not deriv:
        return all(m == 1 for _, m in factor(f).factors)
    return len(_gcd(F, f.codes, deriv)) == 1


def is_irreducible(f: Poly) -> bool:
    if f.is_zero():
        raise ZeroPolynomial("irreducibility of the zero polynomial is undefined")
    return _ben_or(f.spec, _monic(f.spec, f.codes))


def enumerate_monic(spec: FieldSpec, n: int, filter: Union[MonicFilter, str] = MonicFilter.ALL) -> Iterator[Poly]:
    """Monic polynomials of degree n in enumeration order, optionally filtered."""
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    mode = MonicFilter(filter)
    q = spec.q
    for tail in itertools.product(range(q), repeat=n):
        f = Poly(spec, tuple(reversed(tail)) + (1,))
        if mode is MonicFilter.SQUAREFREE and not is_squarefree(f):
            continue
        if mode is MonicFilter.IRREDUCIBLE and not is_irreducible(f):
            continue
        yield f


def _require_odd(spec: FieldSpec) -> None:
    if spec.p == 2:
        raise EvenCharacteristic(f"quadratic characters need odd q ({spec})")


def quadratic_character(D: Poly, f: Poly) -> int:
    """
    The Jacobi-style symbol (D/f) via factorization and Euler's criterion.

    For each prime P | f, D^((|P|-1)/2) mod P is a constant in {0, 1, -1};
    the symbol is the product over the factorization with multiplicities.
    """
    _require_odd(D.spec)
    D._check(f)
    if f.is_zero():
        raise ZeroPolynomial("character at the zero polynomial")
    if not f.is_monic():
        raise NonMonic(f"{f} is not monic")
    F = f.spec
    minus_one = F.neg(1)
    value = 1
    for prime, mult in factor(f).factors:
        r = _pow_mod(F, D.codes, (prime.norm - 1) // 2, prime.codes)
        if not r:
            return 0
        if r == [minus_one] and mult & 1:
            value = -value
    return value


def character_via_resultant(D: Poly, f: Poly) -> int:
    """chi_D(f) = eta(Res(f, D)) for monic f; agrees with quadratic_character."""
    _require_odd(D.spec)
    D._check(f)
    if f.is_zero():
        raise ZeroPolynomial("character at the zero polynomial")
    if not f.is_monic():
        raise NonMonic(f"{f} is not monic")
    return f.spec.eta(_resultant(f.spec, f.codes, D.codes))


def jacobi_symbol(a: Poly, f: Poly) -> int:
    """(a/f) as a Dirichlet character modulo the monic f, evaluated at a."""
    return character_via_resultant(a, f)


def mobius(f: Poly) -> int:
    fact = factor(f)
    if any(m > 1 for _, m in fact.factors):
        return 0
    return -1 if len(fact.factors) % 2 else 1


def von_mangoldt(f: Poly) -> int:
    """deg P when f = P^j, else 0."""
    if f.is_zero() or not f.is_monic():
        raise NonMonic(f"{f} is not a nonzero monic polynomial")
    fact = factor(f)
    if len(fact.factors) != 1:
        return 0
    return int(fact.factors[0][0].degree)


def divisor_count(f: Poly) -> int:
    if f.is_zero() or not f.is_monic():
        raise NonMonic(f"{f} is not a nonzero monic polynomial")
    out = 1
    for _, m in factor(f).factors:
        out *= m + 1
    return out


def mobius_int(n: int) -> int:
    out, d = 1, 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    return -out if n > 1 else out


@lru_cache(maxsize=None)
def irreducible_count(q: int, d: int) -> int:
    """(1/d) * sum_{e | d} mu(e) q^(d/e)."""
    if d < 1:
        return 0
    total = sum(mobius_int(e) * q ** (d // e) for e in range(1, d + 1) if d % e == 0)
    return total // d


def squarefree_count(q: int, n: int) -> int:
    """#H_n: q^n (1 - 1/q) for n >= 2."""
    if n <= 1:
        return q ** n
    return q ** n - q ** (n - 1)


def irreducible_table(spec: FieldSpec, max_deg: int) -> IrreducibleTable:
    """All monic irreducibles of degree <= max_deg, via the monic sieve."""
    from src.algebra.tables import MonicSieve

    if max_deg < 1:
        raise ValueError(f"max_deg must be >= 1, got {max_deg}")
    requested = spec.q ** max_deg
    if requested > settings.irreducible_budget:
        raise BudgetExceeded(requested, settings.irreducible_budget, "monic polynomials")
    sieve = MonicSieve.build(spec, max_deg)
    by_degree = {d: tuple(sieve.primes(d)) for d in range(1, max_deg + 1)}
    logger.debug(f"Irreducible table for {spec} up to degree {max_deg}: {[len(v) for v in by_degree.values()]}")
    return IrreducibleTable(spec, by_degree)
