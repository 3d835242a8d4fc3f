from collections import defaultdict

import numpy as np
import pytest

from src.algebra.ffield import field_of_order
from src.algebra.literals import parse_poly
from src.analysis.northcott import (
    _genus_block,
    central_zero_mask,
    central_zero_search,
    compute_S,
    enumerate_fields,
    member_witnesses,
    verify_witness,
)
from src.errors import BudgetExceeded, EvenCharacteristic, WrongCongruence
from src.models import DedupeMode, EnumerationScope, Witness, WitnessProperty
from src.zeta.curve import make_curve
from src.zeta.lpoly import lpoly_from_charsum


def test_enumeration_streams_genus_then_index():
    fields = list(enumerate_fields(EnumerationScope(q=5, genus_min=0, genus_max=1)))
    assert len(fields) == 5 + 100
    assert [L.coeffs for _, L in fields[:5]] == [[1]] * 5
    assert [c.genus for c, _ in fields] == [0] * 5 + [1] * 100
    curve, L = fields[5]
    assert lpoly_from_charsum(make_curve(curve.D)).coeffs == L.coeffs


def test_enumeration_respects_the_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_fields(EnumerationScope(q=5, genus_max=1, budget=100)))
    with pytest.raises(EvenCharacteristic):
        list(enumerate_fields(EnumerationScope(q=4, genus_max=1)))


def test_affine_orbits_share_an_l_polynomial():
    spec = field_of_order(5)
    rows, coeffs, reps = _genus_block(spec, 1, DedupeMode.RAW)
    by_rep = defaultdict(set)
    for c, rep in zip(coeffs.tolist(), reps.tolist()):
        by_rep[rep].add(tuple(c))
    assert all(len(ls) == 1 for ls in by_rep.values())
    # ten substitutions at most, so at least ten orbits
    assert 10 <= len(by_rep) < 100


def test_dedupe_modes():
    spec = field_of_order(5)
    raw, raw_coeffs, _ = _genus_block(spec, 1, DedupeMode.RAW)
    orbit, _, orbit_reps = _genus_block(spec, 1, DedupeMode.AFFINE_ORBIT)
    by_l, by_l_coeffs, _ = _genus_block(spec, 1, DedupeMode.BY_LPOLYNOMIAL)
    assert len(raw) == 100
    assert len(set(orbit_reps.tolist())) == len(orbit)
    assert len(by_l) == len({tuple(c) for c in raw_coeffs.tolist()})
    assert len(by_l) <= len(orbit) <= len(raw)
    assert {tuple(c) for c in by_l_coeffs.tolist()} == {tuple(c) for c in raw_coeffs.tolist()}


def test_genus_zero_cap_is_complete():
    report = compute_S(9, 0, 0.1, EnumerationScope(q=9, genus_max=0))
    assert report.genus_cap_used == 0
    assert report.complete_within_scope
    assert len(report.members) == 9
    assert all(row.genus == 0 and row.h == 1 and row.order == -1 for row in report.members)
    assert report.class_count_upper == 1 and report.class_count_lower == 1


def test_cap_one_at_q5():
    report = compute_S(5, 0, 0.3, EnumerationScope(q=5, genus_max=0))
    assert report.genus_cap_used == 1
    assert report.complete_within_scope
    assert report.curves_evaluated == 5 + 100
    # h >= 2 for every genus-one field over F_5, and h <= 1.93 is needed
    assert [row.genus for row in report.members] == [0] * 5
    assert all(row.abs_leading == pytest.approx(0.1553, abs=1e-4) for row in report.members)


def test_budget_truncates_instead_of_raising():
    report = compute_S(5, 0, 1.0, EnumerationScope(q=5, budget=4000))
    assert report.genus_cap_used == 4
    assert not report.complete_within_scope
    assert "budget 4000 exhausted before genus 3" in report.scope_caveat
    assert max(row.genus for row in report.rows) == 2


def test_membership_grows_with_B():
    small = compute_S(5, 0, 0.3, EnumerationScope(q=5))
    large = compute_S(5, 0, 1.0, EnumerationScope(q=5, budget=4000))
    assert {r.D for r in small.members} <= {r.D for r in large.members}
    assert len(large.members) > len(small.members)


def test_no_cap_outside_the_northcott_region():
    report = compute_S(5, 2, 1.0, EnumerationScope(q=5, genus_max=1))
    assert report.genus_cap_used is None
    assert not report.complete_within_scope
    assert "no genus cap" in report.scope_caveat
    assert report.curves_evaluated == 105
    with pytest.raises(ValueError):
        compute_S(5, 2, 0, EnumerationScope(q=5))


def test_members_verify_from_D_alone():
    spec = field_of_order(5)
    report = compute_S(5, 0, 0.3, EnumerationScope(q=5))
    witnesses = member_witnesses(report)
    assert witnesses
    for w in witnesses:
        assert verify_witness(w, spec, s=0, B=0.3)
        assert not verify_witness(w, spec, s=0, B=0.1)
    with pytest.raises(ValueError):
        verify_witness(witnesses[0], spec)


def test_central_zero_mask():
    assert central_zero_mask(5, np.array([[1, 0, -5], [1, -2, 5]])).tolist() == [True, False]
    assert central_zero_mask(9, np.array([[1, 0, -9], [1, -6, 9], [1, 6, 9]])).tolist() == [True, True, False]


def test_no_genus_one_central_zero_for_non_square_q():
    report = central_zero_search(5, 3)
    assert report.verified_empty and not report.witnesses
    assert report.curves_searched == 5 + 100


def test_central_zeros_over_f9():
    spec = field_of_order(9)
    report = central_zero_search(9, 3)
    assert report.witnesses and not report.verified_empty
    for w in report.witnesses[:5]:
        assert w.exact_zero and w.property is WitnessProperty.CENTRAL_ZERO
        assert verify_witness(w, spec)
        curve = make_curve(parse_poly(w.D, spec))
        assert lpoly_from_charsum(curve).coeffs[1] == -6


def test_central_zero_search_guards():
    with pytest.raises(WrongCongruence):
        central_zero_search(3, 3)
    with pytest.raises(BudgetExceeded):
        central_zero_search(5, 9, budget=1000)


def test_tampered_central_witness_fails():
    spec = field_of_order(5)
    fake = Witness(D="T^3+T", genus=1, exact_zero=True, property=WitnessProperty.CENTRAL_ZERO)
    assert not verify_witness(fake, spec)
