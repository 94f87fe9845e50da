"""Continued fractions, resolution invariants, dual graphs and U."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from coxres.cox import sigma_set
from coxres.errors import AmbiguityError, InconsistencyError, ParameterError, UnsupportedFamilyError
from coxres.fan import match_action
from coxres.groups import GroupSpec, abelianization_order_formula
from coxres.intmatrix import determinant
from coxres.resolution import (
    DU_VAL,
    ResolutionInvariant,
    bd_invariant,
    branch_constraint_holds,
    build_graph,
    build_U,
    dual_q,
    hjcf_expand,
    hjcf_value,
    pretty_label,
    resolution_invariant,
    search_candidates,
    select_unique,
    variable_labels,
)
from grid import BD_GRID, GRID, POLYHEDRAL_GRID, ids

COPRIME_PAIRS = [(p, q) for p in range(2, 201) for q in range(1, p) if gcd(p, q) == 1]


def _evaluate(entries) -> Fraction:
    """Plain evaluation a1 - 1/(a2 - 1/(...)), the oracle for the expansion."""
    value = Fraction(entries[-1])
    for a in reversed(entries[:-1]):
        value = a - 1 / value
    return value


def test_hjcf_known_expansions():
    assert hjcf_expand(23, 7).entries == (4, 2, 2, 3)
    assert hjcf_expand(5, 4).entries == (2, 2, 2, 2)
    assert hjcf_expand(7, 3).entries == (3, 2, 2)
    assert hjcf_expand(2, 1).entries == (2,)
    assert hjcf_value([4, 2, 2, 3]) == (23, 7)


def test_hjcf_round_trip_all_coprime_pairs_to_200():
    for p, q in COPRIME_PAIRS:
        entries = hjcf_expand(p, q).entries
        assert all(a >= 2 for a in entries)
        assert hjcf_value(entries) == (p, q)
        assert _evaluate(entries) == Fraction(p, q)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(COPRIME_PAIRS))
def test_dual_expansion_is_reversed(pq):
    p, q = pq
    qd = dual_q(p, q) if p > 2 else 1
    assert (q * qd) % p == 1 % p
    assert hjcf_expand(p, qd).entries == tuple(reversed(hjcf_expand(p, q).entries))


@pytest.mark.parametrize("p,q", [(5, 5), (4, 2), (3, 0), (3, 4)])
def test_hjcf_rejects_bad_pairs(p, q):
    with pytest.raises(ParameterError):
        hjcf_expand(p, q)


def test_hjcf_value_rejects_small_entries():
    with pytest.raises(ParameterError):
        hjcf_value([3, 1])
    with pytest.raises(ParameterError):
        hjcf_value([])


# ---------------------------------------------------------------------------
# invariants


def test_invariant_parse_and_str():
    inv = ResolutionInvariant.parse("<3; 2,1; 2,1; 23,7>")
    assert inv == ResolutionInvariant(3, ((2, 1), (2, 1), (23, 7)))
    assert str(inv) == "<3; 2,1; 2,1; 23,7>"
    assert ResolutionInvariant.parse(str(inv)) == inv
    assert inv.lengths() == (1, 1, 4) and inv.n == 7
    with pytest.raises(ParameterError):
        ResolutionInvariant.parse("<3; 2,1; 2,1>")
    with pytest.raises(ParameterError):
        ResolutionInvariant(1, ((2, 1), (2, 1), (3, 1)))


SMALL_PAIRS = [pq for pq in COPRIME_PAIRS if pq[0] <= 9]


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 6), st.sampled_from(SMALL_PAIRS), st.sampled_from(SMALL_PAIRS))
def test_r_equals_determinant_of_U0(d, b2, b3):
    inv = ResolutionInvariant(d, ((2, 1), b2, b3))
    U = build_U(build_graph(inv))
    expect = sp.Matrix([list(r) for r in U.U0().entries]).det()
    assert expect == (-1) ** inv.n * inv.r()
    assert determinant(U.U0()) == expect


def test_du_val_graphs():
    assert [len(b) for b in DU_VAL["BT"].branches()] == [1, 2, 2]
    assert [len(b) for b in DU_VAL["BO"].branches()] == [1, 2, 3]
    assert [len(b) for b in DU_VAL["BI"].branches()] == [1, 2, 4]
    for k in range(2, 8):
        inv = bd_invariant(k, 1)
        assert inv.n == k + 2
        assert set(a for b in inv.branches() for a in b) | {inv.d} == {2}


def test_bd_rule_examples():
    assert bd_invariant(23, 39) == ResolutionInvariant(3, ((2, 1), (2, 1), (23, 7)))
    assert bd_invariant(5, 2).d == 2
    for spec in BD_GRID:
        inv = bd_invariant(spec.n, spec.m)
        assert inv.pairs[2][0] == spec.n
        assert inv.r() == abelianization_order_formula(spec)


@pytest.mark.parametrize("spec", BD_GRID[::5], ids=ids(BD_GRID[::5]))
def test_bd_rule_is_among_matching_search_candidates(spec):
    sigmas = sigma_set(spec)
    matching = [c for c in search_candidates(spec) if match_action(spec, c, sigmas).matched]
    assert bd_invariant(spec.n, spec.m) in matching


@pytest.mark.parametrize("spec", POLYHEDRAL_GRID, ids=ids(POLYHEDRAL_GRID))
def test_search_finds_exactly_one_invariant(spec):
    sigmas = sigma_set(spec)
    survivors = [c for c in search_candidates(spec) if match_action(spec, c, sigmas).matched]
    assert len(survivors) == 1
    assert survivors[0] == resolution_invariant(spec)


EXPECTED_INVARIANTS = {
    "BT:3": "<2; 2,1; 3,1; 3,2>",
    "BT:5": "<2; 2,1; 3,1; 3,1>",
    "BT:7": "<3; 2,1; 3,2; 3,2>",
    "BO:5": "<2; 2,1; 3,1; 4,3>",
    "BO:11": "<2; 2,1; 3,1; 4,1>",
    "BI:7": "<2; 2,1; 3,2; 5,3>",
    "BI:11": "<2; 2,1; 3,1; 5,4>",
    "BI:13": "<2; 2,1; 3,2; 5,2>",
}


@pytest.mark.parametrize("label", sorted(EXPECTED_INVARIANTS))
def test_search_results_are_frozen(label):
    assert str(resolution_invariant(GroupSpec.parse(label))) == EXPECTED_INVARIANTS[label]


def test_branch_constraint():
    assert branch_constraint_holds(ResolutionInvariant(2, ((2, 1), (3, 2), (5, 4))))
    assert not branch_constraint_holds(ResolutionInvariant(2, ((3, 1), (3, 2), (5, 4))))
    assert not branch_constraint_holds(ResolutionInvariant(2, ((2, 1), (5, 2), (5, 4))))


def test_select_unique_reports_every_survivor():
    a = ResolutionInvariant(2, ((2, 1), (3, 1), (3, 1)))
    b = ResolutionInvariant(2, ((2, 1), (3, 1), (3, 2)))
    with pytest.raises(AmbiguityError) as info:
        select_unique([a, b], lambda inv: True, "synthetic")
    assert info.value.candidates == [a, b]
    with pytest.raises(InconsistencyError):
        select_unique([a, b], lambda inv: False, "synthetic")
    assert select_unique([a, b], lambda inv: inv == b, "synthetic") == b


def test_cyclic_has_no_star_invariant():
    with pytest.raises(UnsupportedFamilyError):
        resolution_invariant(GroupSpec.cyclic(5, 2))


# ---------------------------------------------------------------------------
# graphs and U


def test_graph_of_bd_23_39():
    g = build_graph(bd_invariant(23, 39))
    assert g.node_labels() == ["E0", "E1_1", "E2_1", "E3_1", "E3_2", "E3_3", "E3_4"]
    assert g.self_intersections() == [-3, -2, -2, -4, -2, -2, -3]
    assert len(g.edges()) == 6


def test_labels():
    g = build_graph(DU_VAL["BO"])
    assert variable_labels(g) == ["y0", "y1_1", "x1", "y2_1", "y2_2", "x2", "y3_1", "y3_2", "y3_3", "x3"]
    assert pretty_label("y3_2") == "y_{3,2}"
    assert pretty_label("x1") == "x_1"
    assert pretty_label("y0") == "y_0"


@pytest.mark.parametrize("spec", GRID[::3], ids=ids(GRID[::3]))
def test_U_structure(spec):
    inv = resolution_invariant(spec)
    U = build_U(build_graph(inv))
    m = U.matrix
    assert m.shape == (inv.n, inv.n + 3)
    U0 = U.U0()
    assert U0 == U0.transpose()
    assert abs(determinant(U0)) == inv.r()
    for k in U.outer_columns():
        col = m.column(k)
        assert sorted(col) == [0] * (inv.n - 1) + [1]
