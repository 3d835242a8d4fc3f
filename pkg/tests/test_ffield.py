import pytest
from hypothesis import given, settings as hsettings, strategies as st

from src.algebra.ffield import (
    FieldElement,
    SquareClass,
    fe_arith,
    fe_enumerate,
    fe_is_square,
    field_make,
    field_of_order,
    prime_power_decomposition,
)
from src.algebra.literals import parse_field
from src.errors import (
    DegreeMismatch,
    DivisionByZero,
    EvenCharacteristic,
    FieldMismatch,
    InvalidPrimePower,
    NonPrime,
    ReducibleModulus,
)

ORDERS = [2, 3, 4, 5, 7, 8, 9, 25, 27]


@pytest.mark.parametrize("q,expected", [(9, (3, 2)), (5, (5, 1)), (8, (2, 3)), (6, None), (1, None), (12, None)])
def test_prime_power_decomposition(q, expected):
    assert prime_power_decomposition(q) == expected


def test_default_modulus_of_f9_is_t2_plus_1(f9):
    assert f9.modulus == (1, 0, 1)
    i = f9.element(3)  # the class of x
    assert (i * i).code == f9.neg(1)


def test_invalid_fields():
    with pytest.raises(NonPrime):
        field_make(6)
    with pytest.raises(ReducibleModulus):
        field_make(3, 2, [2, 0, 1])
    with pytest.raises(DegreeMismatch):
        field_make(3, 2, [1, 1, 0, 1])
    with pytest.raises(InvalidPrimePower):
        field_of_order(10)


@pytest.mark.parametrize("q", ORDERS)
@given(data=st.data())
@hsettings(max_examples=40, deadline=None)
def test_field_axioms(q, data):
    spec = field_of_order(q)
    code = st.integers(min_value=0, max_value=q - 1)
    a, b, c = data.draw(code), data.draw(code), data.draw(code)
    assert spec.add(spec.add(a, b), c) == spec.add(a, spec.add(b, c))
    assert spec.mul(spec.mul(a, b), c) == spec.mul(a, spec.mul(b, c))
    assert spec.mul(a, spec.add(b, c)) == spec.add(spec.mul(a, b), spec.mul(a, c))
    assert spec.add(a, spec.neg(a)) == 0
    assert spec.sub(spec.add(a, b), b) == a
    if a:
        assert spec.mul(a, spec.inv(a)) == 1
        assert spec.pow(a, q - 1) == 1


@pytest.mark.parametrize("q", [3, 5, 9, 25, 27])
def test_half_the_units_are_squares(q):
    spec = field_of_order(q)
    classes = [fe_is_square(x) for x in fe_enumerate(spec)]
    assert classes[0] is SquareClass.ZERO
    assert classes.count(SquareClass.SQUARE) == (q - 1) // 2
    assert classes.count(SquareClass.NONSQUARE) == (q - 1) // 2


def test_enumeration_is_in_code_order(f9):
    elements = list(fe_enumerate(f9))
    assert [x.code for x in elements] == list(range(9))
    assert str(elements[4]) == "[1,1]"


def test_fe_arith_dispatch(f5):
    a, b = f5.element(2), f5.element(4)
    assert fe_arith(a, b, "add").code == 1
    assert fe_arith(a, b, "sub").code == 3
    assert fe_arith(a, b, "mul").code == 3
    assert fe_arith(a, b, "div").code == 3
    assert fe_arith(a, b, "pow", k=3).code == 3
    with pytest.raises(DivisionByZero):
        fe_arith(a, f5.element(0), "div")
    with pytest.raises(FieldMismatch):
        fe_arith(a, field_make(7).element(1), "add")


def test_quadratic_character_needs_odd_q():
    with pytest.raises(EvenCharacteristic):
        fe_is_square(FieldElement(field_make(2, 2), 1))


def test_parse_field_literals(f9):
    assert parse_field("q=3^2") == f9
    assert parse_field("9") == f9
    assert parse_field("q=9", "T^2+1") == f9
    with pytest.raises(InvalidPrimePower):
        parse_field("6")


@pytest.mark.parametrize("literal", ["q=2^100000000", "3^100", "10^50", "9" * 400, "q=5^" + "1" * 30])
def test_oversized_field_literals_are_rejected_early(literal):
    with pytest.raises(InvalidPrimePower):
        parse_field(literal)
