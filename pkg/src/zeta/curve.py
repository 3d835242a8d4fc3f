"""Imaginary hyperelliptic models y^2 = D(T) with D monic squarefree of odd degree."""
from dataclasses import dataclass

from src.algebra.ffield import FieldSpec
from src.algebra.polyring import Poly, is_squarefree
from src.errors import EvenCharacteristic, InvalidCurve


@dataclass(frozen=True)
class CurveModel:
    """K = F_q(T)(sqrt(D)) for D in H_{2g+1}."""

    spec: FieldSpec
    D: Poly
    genus: int

    @property
    def q(self) -> int:
        return self.spec.q

    def __str__(self) -> str:
        return f"y^2 = {self.D} over {self.spec}"


def make_curve(D: Poly) -> CurveModel:
    """Validate D and derive the genus (deg D - 1) / 2."""
    spec = D.spec
    if spec.p == 2:
        raise EvenCharacteristic(f"hyperelliptic models need odd q ({spec})")
    if D.is_zero() or not D.is_monic():
        raise InvalidCurve(f"D = {D} must be monic")
    degree = int(D.degree)
    if degree % 2 == 0:
        raise InvalidCurve(f"D = {D} has even degree {degree}")
    if not is_squarefree(D):
        raise InvalidCurve(f"D = {D} is not squarefree")
    return CurveModel(spec, D, (degree - 1) // 2)
