"""Vectorized kernels over F_q and the smallest-prime-factor sieve on monics.

Batches of polynomials are numpy integer matrices of field codes, one row
per polynomial, constant term in column 0.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np
from loguru import logger

from src.config import settings
from src.algebra.ffield import FieldSpec
from src.algebra.polyring import Poly
from src.errors import BudgetExceeded


# ==================== FIELD ARITHMETIC ON ARRAYS ====================

class FieldTables:
    """numpy arithmetic on arrays of field codes."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p = spec.p
        self.q = spec.q
        if spec.e > 1:
            if spec._log is None:
                raise BudgetExceeded(spec.q, settings.field_table_limit, "field elements for log tables")
            self._log = np.asarray(spec._log, dtype=np.int64)
            self._exp = np.asarray(spec._exp, dtype=np.int64)

    def add(self, x, y):
        if self.spec.e == 1:
            return (x + y) % self.p
        p = self.p
        out = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
        mult = 1
        for _ in range(self.spec.e):
            out += ((x // mult % p + y // mult % p) % p) * mult
            mult *= p
        return out

    def neg(self, x):
        if self.spec.e == 1:
            return (-x) % self.p
        p = self.p
        out = np.zeros(np.shape(x), dtype=np.int64)
        mult = 1
        for _ in range(self.spec.e):
            out += ((-(x // mult % p)) % p) * mult
            mult *= p
        return out

    def sub(self, x, y):
        if self.spec.e == 1:
            return (x - y) % self.p
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if self.spec.e == 1:
            return (x * y) % self.p
        x = np.asarray(x)
        y = np.asarray(y)
        zero = (x == 0) | (y == 0)
        out = self._exp[(self._log[x] + self._log[y]) % (self.q - 1)]
        return np.where(zero, 0, out)


@lru_cache(maxsize=None)
def field_tables(spec: FieldSpec) -> FieldTables:
    return FieldTables(spec)


@lru_cache(maxsize=None)
def monic_digits(q: int, n: int) -> np.ndarray:
    """All monic polynomials of degree n as a (q^n, n+1) code matrix, in enumeration order."""
    local = np.arange(q ** n, dtype=np.int64)
    out = np.ones((q ** n, n + 1), dtype=np.int64)
    if n:
        out[:, :n] = local[:, None] // (q ** np.arange(n, dtype=np.int64)) % q
    out.setflags(write=False)
    return out


def local_index(rows: np.ndarray, q: int) -> np.ndarray:
    """Enumeration index of each monic row (leading column excluded)."""
    n = rows.shape[1] - 1
    return rows[:, :n] @ (q ** np.arange(n, dtype=np.int64))


# ==================== BATCH POLYNOMIAL KERNELS ====================

def batch_mul(T: FieldTables, A: np.ndarray, b: Sequence[int]) -> np.ndarray:
    """Each row of A times the fixed polynomial b."""
    rows, na = A.shape
    out = np.zeros((rows, na + len(b) - 1), dtype=np.int64)
    for j, bj in enumerate(b):
        if bj:
            out[:, j:j + na] = T.add(out[:, j:j + na], T.mul(A, bj))
    return out


def batch_rem(T: FieldTables, A: np.ndarray, P: Sequence[int]) -> np.ndarray:
    """Remainder of each row of A modulo the fixed monic P."""
    d = len(P) - 1
    A = np.array(A, dtype=np.int64)
    if A.shape[1] <= d:
        out = np.zeros((A.shape[0], d), dtype=np.int64)
        out[:, :A.shape[1]] = A
        return out
    negP = [T.spec.neg(c) for c in P[:-1]]
    for i in range(A.shape[1] - 1, d - 1, -1):
        c = A[:, i]
        for j, nj in enumerate(negP):
            if nj:
                col = i - d + j
                A[:, col] = T.add(A[:, col], T.mul(c, nj))
    return A[:, :d]


def batch_mulmod(T: FieldTables, X: np.ndarray, Y: np.ndarray, P: Sequence[int]) -> np.ndarray:
    d = X.shape[1]
    prod = np.zeros((X.shape[0], 2 * d - 1), dtype=np.int64)
    if T.spec.e == 1:
        for i in range(d):
            prod[:, i:i + d] = (prod[:, i:i + d] + X[:, i:i + 1] * Y) % T.p
    else:
        for i in range(d):
            prod[:, i:i + d] = T.add(prod[:, i:i + d], T.mul(X[:, i:i + 1], Y))
    return batch_rem(T, prod, P)


def prime_character_batch(spec: FieldSpec, D: np.ndarray, P: Sequence[int]) -> np.ndarray:
    """
    chi_D(P) for every row D by Euler's criterion in F_q[T]/P.

    Args:
        spec: The base field (q odd)
        D: (batch, deg D + 1) code matrix
        P: Monic irreducible as a code sequence

    Returns:
        int8 array of values in {-1, 0, 1}
    """
    T = field_tables(spec)
    d = len(P) - 1
    base = batch_rem(T, D, P)
    result = np.zeros_like(base)
    result[:, 0] = 1
    k = (spec.q ** d - 1) // 2
    while k:
        if k & 1:
            result = batch_mulmod(T, result, base, P)
        k >>= 1
        if k:
            base = batch_mulmod(T, base, base, P)
    value = result[:, 0]
    return np.where(value == 1, 1, np.where(value == 0, 0, -1)).astype(np.int8)


def batch_eval(T: FieldTables, D: np.ndarray, x: int) -> np.ndarray:
    """Each row of D evaluated at the field element x (Horner)."""
    acc = np.zeros(D.shape[0], dtype=np.int64)
    for i in range(D.shape[1] - 1, -1, -1):
        acc = T.add(T.mul(acc, x), D[:, i])
    return acc


# ==================== MONIC SIEVE ====================

@dataclass(frozen=True, eq=False)
class MonicSieve:
    """
    Smallest-prime-factor table over all monic polynomials of degree <= max_deg.

    Global index of a monic f of degree n is offsets[n] + f.index, so the
    polynomial 1 has index 0. spf[i] is the global index of the smallest
    prime factor (a prime maps to itself) and cof[i] the index of f / spf.
    """

    spec: FieldSpec
    max_deg: int
    offsets: Tuple[int, ...]
    spf: np.ndarray
    cof: np.ndarray

    @classmethod
    def build(cls, spec: FieldSpec, max_deg: int) -> "MonicSieve":
        return _build_sieve(spec, max_deg)

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def size(self) -> int:
        return self.offsets[self.max_deg + 1]

    def degree_slice(self, n: int) -> slice:
        return slice(self.offsets[n], self.offsets[n + 1])

    def global_index(self, f: Poly) -> int:
        return self.offsets[int(f.degree)] + f.index

    def poly(self, gidx: int) -> Poly:
        n = next(k for k in range(self.max_deg + 1) if gidx < self.offsets[k + 1])
        return Poly.monic_from_index(self.spec, n, gidx - self.offsets[n])

    def prime_indices(self, d: int) -> np.ndarray:
        sl = self.degree_slice(d)
        idx = np.arange(sl.start, sl.stop)
        return idx[self.spf[sl] == idx]

    def primes(self, d: int) -> Iterator[Poly]:
        for g in self.prime_indices(d):
            yield Poly.monic_from_index(self.spec, d, int(g) - self.offsets[d])

    def factor_indices(self, gidx: int) -> List[Tuple[int, int]]:
        """(prime index, multiplicity) pairs, smallest prime first."""
        out: List[Tuple[int, int]] = []
        while gidx:
            prime = int(self.spf[gidx])
            if out and out[-1][0] == prime:
                out[-1] = (prime, out[-1][1] + 1)
            else:
                out.append((prime, 1))
            gidx = int(self.cof[gidx])
        return out

    def extend(self, prime_values: np.ndarray) -> np.ndarray:
        """
        Completely multiplicative extension of values given on primes.

        prime_values has the sieve size on its last axis; entries at
        composite positions are ignored and the value at 1 is set to 1.
        """
        out = np.array(prime_values, copy=True)
        out[..., 0] = 1
        for n in range(2, self.max_deg + 1):
            comp = _composites(self, n)
            out[..., comp] = out[..., self.spf[comp]] * out[..., self.cof[comp]]
        return out

    def mobius(self) -> np.ndarray:
        return _mobius(self)

    def squarefree_local(self, n: int) -> np.ndarray:
        """Enumeration indices of the squarefree monics of degree n."""
        sl = self.degree_slice(n)
        return np.nonzero(self.mobius()[sl])[0]


@lru_cache(maxsize=None)
def _composites(sieve: MonicSieve, n: int) -> np.ndarray:
    sl = sieve.degree_slice(n)
    idx = np.arange(sl.start, sl.stop)
    return idx[sieve.spf[sl] != idx]


@lru_cache(maxsize=None)
def _mobius(sieve: MonicSieve) -> np.ndarray:
    mu = np.zeros(sieve.size, dtype=np.int8)
    mu[0] = 1
    for n in range(1, sieve.max_deg + 1):
        sl = sieve.degree_slice(n)
        idx = np.arange(sl.start, sl.stop)
        spf = sieve.spf[sl]
        prime = spf == idx
        cof = sieve.cof[sl]
        repeated = sieve.spf[cof] == spf
        mu[sl] = np.where(prime, -1, np.where(repeated, 0, -mu[cof]))
    mu.setflags(write=False)
    return mu


@lru_cache(maxsize=16)
def _build_sieve(spec: FieldSpec, max_deg: int) -> MonicSieve:
    q = spec.q
    requested = q ** max_deg
    if requested > settings.irreducible_budget:
        raise BudgetExceeded(requested, settings.irreducible_budget, "monic polynomials")
    offsets = tuple((q ** n - 1) // (q - 1) for n in range(max_deg + 2))
    size = offsets[max_deg + 1]
    spf = np.full(size, -1, dtype=np.int64)
    cof = np.zeros(size, dtype=np.int64)
    spf[0] = -1
    T = field_tables(spec) if 2 <= max_deg else None
    for d in range(1, max_deg + 1):
        sl = slice(offsets[d], offsets[d + 1])
        idx = np.arange(sl.start, sl.stop)
        fresh = idx[spf[sl] == -1]
        spf[fresh] = fresh
        if 2 * d > max_deg:
            continue
        digits = monic_digits(q, d)
        for g in fresh:
            P = digits[int(g) - offsets[d]]
            for k in range(d, max_deg - d + 1):
                prod = batch_mul(T, monic_digits(q, k), P)
                target = offsets[d + k] + local_index(prod, q)
                unset = spf[target] == -1
                spf[target[unset]] = g
                cof[target[unset]] = offsets[k] + np.nonzero(unset)[0]
    spf.setflags(write=False)
    cof.setflags(write=False)
    logger.debug(f"Built monic sieve for {spec} up to degree {max_deg} ({size} entries)")
    return MonicSieve(spec, max_deg, offsets, spf, cof)


def squarefree_rows(spec: FieldSpec, n: int) -> np.ndarray:
    """H_n, the monic squarefree polynomials of degree n, as a code matrix in enumeration order."""
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    sieve = MonicSieve.build(spec, n)
    return monic_digits(spec.q, n)[sieve.squarefree_local(n)]
