"""Finite fields and polynomial rings over them."""
from src.algebra.ffield import (
    FieldElement,
    FieldSpec,
    SquareClass,
    fe_arith,
    fe_enumerate,
    fe_is_square,
    field_make,
)
from src.algebra.literals import format_complex, parse_complex, parse_field, parse_poly, parse_real
from src.algebra.polyring import (
    Factorization,
    IrreducibleTable,
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
from src.algebra.tables import MonicSieve

__all__ = [
    "FieldElement",
    "FieldSpec",
    "SquareClass",
    "fe_arith",
    "fe_enumerate",
    "fe_is_square",
    "field_make",
    "format_complex",
    "parse_complex",
    "parse_field",
    "parse_poly",
    "parse_real",
    "Factorization",
    "IrreducibleTable",
    "MonicFilter",
    "Poly",
    "character_via_resultant",
    "divisor_count",
    "enumerate_monic",
    "factor",
    "irreducible_count",
    "irreducible_table",
    "is_irreducible",
    "is_squarefree",
    "jacobi_symbol",
    "mobius",
    "poly_arith",
    "quadratic_character",
    "squarefree_count",
    "von_mangoldt",
    "MonicSieve",
]
