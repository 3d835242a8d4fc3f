"""Shared fixtures: small fields and the worked example curve."""
import pytest

from src.algebra.ffield import field_make
from src.algebra.literals import parse_poly
from src.zeta.curve import make_curve


@pytest.fixture(scope="session")
def f3():
    return field_make(3)


@pytest.fixture(scope="session")
def f5():
    return field_make(5)


@pytest.fixture(scope="session")
def f9():
    return field_make(3, 2)


@pytest.fixture(scope="session")
def example_curve(f5):
    """y^2 = T^3 + T over F_5: L = 1 - 2u + 5u^2, h = 4."""
    return make_curve(parse_poly("T^3+T", f5))


@pytest.fixture
def poly5(f5):
    return lambda text: parse_poly(text, f5)
