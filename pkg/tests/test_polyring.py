import itertools

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from src.algebra.literals import parse_poly
from src.algebra.polyring import (
    MonicFilter,
    Poly,
    character_via_resultant,
    divisor_count,
    enumerate_monic,
    factor,
    irreducible_count,
    irreducible_table,
    is_irreducible,
    is_squarefree,
    jacobi_symbol,
    mobius,
    poly_arith,
    quadratic_character,
    squarefree_count,
    von_mangoldt,
)
from src.algebra.tables import MonicSieve, squarefree_rows
from src.errors import NonMonic, ParseError, ZeroPolynomial

coeff_lists = st.lists(st.integers(min_value=0, max_value=4), min_size=1, max_size=7)


def _poly(f5, coeffs):
    return Poly.from_ints(f5, coeffs)


def test_literal_round_trip(f5, f9):
    for text in ["T^3+4*T", "T", "3", "2*T^5+T^2+1"]:
        assert str(parse_poly(text, f5)) == text
    g = parse_poly("T^2+[0,1]*T+[2,1]", f9)
    assert parse_poly(str(g), f9) == g


def test_literal_errors_carry_a_position(f5):
    with pytest.raises(ParseError) as info:
        parse_poly("T^3+*T", f5)
    assert info.value.position is not None
    with pytest.raises(ParseError):
        parse_poly("T^2+7", f5)


@given(a=coeff_lists, b=coeff_lists)
@hsettings(max_examples=60, deadline=None)
def test_ring_identities(f5, a, b):
    f, g = _poly(f5, a), _poly(f5, b)
    assert poly_arith(f, g, "add") - g == f
    if not g.is_zero():
        quo, rem = poly_arith(f, g, "divmod")
        assert quo * g + rem == f
        assert rem.is_zero() or rem.degree < g.degree
        d = poly_arith(f, g, "gcd")
        assert (f % d).is_zero() and (g % d).is_zero()


@given(a=coeff_lists)
@hsettings(max_examples=60, deadline=None)
def test_factorization_expands_back(f5, a):
    f = _poly(f5, a)
    if f.is_zero():
        return
    fact = factor(f)
    assert fact.expand() == f
    assert all(is_irreducible(P) and P.is_monic() for P in fact.primes)
    assert is_squarefree(f) == all(m == 1 for _, m in fact.factors)


def test_factorization_is_deterministic(f9):
    f = parse_poly("T^6+2*T^3+T", f9)
    assert factor(f, seed=1).factors == factor(f, seed=99).factors


def test_zero_polynomial_errors(f5):
    with pytest.raises(ZeroPolynomial):
        factor(Poly.zero(f5))
    with pytest.raises(ZeroPolynomial):
        is_squarefree(Poly.zero(f5))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_monic_counts(f5, n):
    assert sum(1 for _ in enumerate_monic(f5, n)) == 5 ** n
    assert sum(1 for _ in enumerate_monic(f5, n, MonicFilter.SQUAREFREE)) == squarefree_count(5, n)
    assert sum(1 for _ in enumerate_monic(f5, n, "irreducible")) == irreducible_count(5, n)


def test_irreducible_table_matches_necklace_count(f9):
    table = irreducible_table(f9, 3)
    assert [table.count(d) for d in (1, 2, 3)] == [9, 36, 240]
    assert list(table.by_degree[1]) == list(enumerate_monic(f9, 1))


def test_squarefree_rows_are_h_n(f5):
    rows = squarefree_rows(f5, 3)
    assert len(rows) == 100
    polys = [Poly(f5, tuple(r)) for r in rows.tolist()]
    assert polys == list(enumerate_monic(f5, 3, MonicFilter.SQUAREFREE))


def test_sieve_factorizations(f5):
    sieve = MonicSieve.build(f5, 4)
    for gidx in range(1, sieve.size, 37):
        f = sieve.poly(gidx)
        expected = [(sieve.global_index(P), m) for P, m in factor(f).factors]
        assert sorted(sieve.factor_indices(gidx)) == sorted(expected)


def test_arithmetic_functions(poly5):
    assert von_mangoldt(poly5("T^2")) == 1
    assert von_mangoldt(poly5("T^2+2")) == 2
    assert von_mangoldt(poly5("T^2+T")) == 0
    assert divisor_count(poly5("T^3+T^2")) == 6
    assert mobius(poly5("T^2+T")) == 1
    assert mobius(poly5("T+1")) == -1
    assert mobius(poly5("T^3")) == 0
    with pytest.raises(NonMonic):
        divisor_count(poly5("2*T"))


def test_character_routes_agree(f5, f9):
    for spec, D in [(f5, "T^3+T"), (f5, "T^5+2*T+1"), (f9, "T^3+[0,1]")]:
        D = parse_poly(D, spec)
        for n in (1, 2):
            for f in enumerate_monic(spec, n):
                assert quadratic_character(D, f) == character_via_resultant(D, f)


def test_character_is_multiplicative(poly5):
    D = poly5("T^3+T")
    monics = [f for n in (1, 2) for f in enumerate_monic(D.spec, n)]
    for f, g in itertools.product(monics[:12], monics[5:20]):
        assert character_via_resultant(D, f * g) == character_via_resultant(D, f) * character_via_resultant(D, g)


def test_jacobi_symbol_is_periodic_mod_f(poly5):
    f = poly5("T^3+T+1")
    for a in enumerate_monic(f.spec, 4):
        r = a % f
        if r.is_zero():
            assert jacobi_symbol(a, f) == 0
        else:
            assert jacobi_symbol(a, f) == jacobi_symbol(r, f)


def test_sieve_mobius_matches_factorization(f5):
    sieve = MonicSieve.build(f5, 3)
    mu = sieve.mobius()
    for gidx in range(1, sieve.size):
        assert mu[gidx] == mobius(sieve.poly(gidx))
    assert int(np.count_nonzero(mu[sieve.degree_slice(3)])) == squarefree_count(5, 3)


def test_ring_helpers(poly5):
    f = poly5("T^3+T")
    assert f.derivative() == poly5("3*T^2+1")
    assert f.eval(2) == 0 and f.eval(1) == 2
    assert poly5("T^2+1").compose(poly5("T+1")) == poly5("T^2+2*T+2")
    # Frobenius on F_25 = F_5[T]/(T^2+2)
    assert poly5("T").pow_mod(5, poly5("T^2+2")) == poly5("4*T")


def test_resultant_detects_common_roots(poly5):
    assert poly5("T^2+1").resultant(poly5("T")) == 1
    assert poly5("T^2+1").resultant(poly5("T+3")) == 0
    assert poly5("T^2+2").resultant(poly5("T^2+1")) != 0
