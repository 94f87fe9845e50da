"""Cyclotomic numbers, integer matrices and polynomials against sympy."""

from __future__ import annotations

import time
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from coxres.cyclotomic import (
    Cyclotomic,
    cyclotomic_coefficients,
    divisors,
    euler_phi,
    i_unit,
    root_of_unity_exponent,
    sqrt_five,
    sqrt_minus_three,
)
from coxres.errors import ParameterError
from coxres.intmatrix import (
    IntMatrix,
    adjugate,
    determinant,
    invariant_factors,
    inverse_unimodular,
    leading_principal_minors,
    smith_normal_form,
)
from coxres.linalg import nullspace, solve
from coxres.polynomial import MultiPoly, cyclotomic_polynomial, poly_substitute, rational_poly

X = sp.Symbol("x")


def _sympy_residue(order: int, coeffs) -> sp.Poly:
    """Reduce sum c_j x^j modulo Phi_order with sympy."""
    poly = sp.Poly(sum(sp.Rational(c) * X**j for j, c in enumerate(coeffs)), X, domain="QQ")
    return poly.rem(sp.Poly(sp.cyclotomic_poly(order, X), X, domain="QQ"))


def _as_sympy(c: Cyclotomic) -> sp.Poly:
    return _sympy_residue(c.order, c.coeffs)


orders = st.integers(min_value=1, max_value=40)
small = st.lists(st.integers(min_value=-6, max_value=6), min_size=1, max_size=12)


# ---------------------------------------------------------------------------
# cyclotomic fields


@pytest.mark.parametrize("n", range(1, 121))
def test_cyclotomic_coefficients_match_sympy(n):
    expect = sp.Poly(sp.cyclotomic_poly(n, X), X).all_coeffs()[::-1]
    assert list(cyclotomic_coefficients(n)) == [int(c) for c in expect]


def test_euler_phi_and_divisors_match_sympy():
    for n in range(1, 300):
        assert euler_phi(n) == sp.totient(n)
        assert divisors(n) == sp.divisors(n)


@settings(max_examples=150, deadline=None)
@given(orders, small, small)
def test_field_operations_agree_with_polynomial_reduction(order, u, v):
    a, b = Cyclotomic(order, u), Cyclotomic(order, v)
    assert _as_sympy(a + b) == _sympy_residue(order, [x + y for x, y in _pad(u, v)])
    prod = sp.Poly(sum(c * X**j for j, c in enumerate(u)), X) * sp.Poly(sum(c * X**j for j, c in enumerate(v)), X)
    assert _as_sympy(a * b) == prod.rem(sp.Poly(sp.cyclotomic_poly(order, X), X, domain="QQ"))


def _pad(u, v):
    n = max(len(u), len(v))
    return list(zip(u + [0] * (n - len(u)), v + [0] * (n - len(v))))


@settings(max_examples=100, deadline=None)
@given(orders, small)
def test_inverse(order, u):
    a = Cyclotomic(order, u)
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            a.inverse()
        return
    assert a * a.inverse() == 1


@settings(max_examples=100, deadline=None)
@given(orders, small, st.integers(min_value=2, max_value=5))
def test_lift_restrict_round_trip(order, u, k):
    a = Cyclotomic(order, u)
    big = a.lift(order * k)
    assert big == a
    assert big.restrict(order) == a
    assert abs(big.to_complex() - a.to_complex()) < 1e-9 * (1 + abs(a.to_complex()))


@settings(max_examples=100, deadline=None)
@given(orders, small)
def test_conjugate_is_complex_conjugate(order, u):
    a = Cyclotomic(order, u)
    assert abs(a.conjugate().to_complex() - a.to_complex().conjugate()) < 1e-9 * (1 + abs(a.to_complex()))
    assert a.conjugate() == a.galois(-1)


def test_named_constants():
    assert i_unit() ** 2 == -1
    assert sqrt_minus_three() ** 2 == -3
    assert sqrt_five() ** 2 == 5
    assert Cyclotomic.zeta(12, 3) == i_unit()
    assert Cyclotomic.zeta(12, 3).minimal_order().order == 4
    assert Cyclotomic.zeta(10, 5).minimal_order() == -1


def test_root_of_unity_exponent():
    assert root_of_unity_exponent(Cyclotomic.zeta(12, 5), 12) == 5
    assert root_of_unity_exponent(Cyclotomic.zeta(6), 12) == 2
    assert root_of_unity_exponent(Cyclotomic.zeta(8), 12) is None
    assert root_of_unity_exponent(Cyclotomic.rational(2), 4) is None


def test_equality_across_orders_and_hash_of_rationals():
    half = Cyclotomic.rational(Fraction(1, 2), 7)
    assert half == Fraction(1, 2)
    assert hash(half) == hash(Fraction(1, 2))
    assert Cyclotomic.zeta(3) == Cyclotomic.zeta(6, 2)


def test_bad_order_rejected():
    with pytest.raises(ParameterError):
        Cyclotomic(0, [1])
    with pytest.raises(ParameterError):
        Cyclotomic.zeta(6).lift(9)


# ---------------------------------------------------------------------------
# integer matrices

square = st.integers(min_value=1, max_value=5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)
)
rect = st.tuples(st.integers(1, 5), st.integers(1, 6)).flatmap(
    lambda s: st.lists(st.lists(st.integers(-12, 12), min_size=s[1], max_size=s[1]), min_size=s[0], max_size=s[0])
)


@settings(max_examples=150, deadline=None)
@given(square)
def test_determinant_and_adjugate_match_sympy(rows):
    m = IntMatrix(rows)
    assert determinant(m) == sp.Matrix(rows).det()
    assert [list(r) for r in adjugate(m).entries] == sp.Matrix(rows).adjugate().tolist()
    minors = leading_principal_minors(m)
    assert minors == [sp.Matrix(rows)[:k, :k].det() for k in range(1, len(rows) + 1)]


@settings(max_examples=150, deadline=None)
@given(rect)
def test_smith_normal_form_transforms_and_diagonal(rows):
    m = IntMatrix(rows)
    s, left, right = smith_normal_form(m)
    assert left @ m @ right == s
    assert abs(determinant(left)) == 1 and abs(determinant(right)) == 1
    diag = [s[k, k] for k in range(min(m.rows, m.cols))]
    for i in range(s.rows):
        for j in range(s.cols):
            if i != j:
                assert s[i, j] == 0
    nonzero = [d for d in diag if d]
    assert all(d > 0 for d in nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    expect = sympy_snf(sp.Matrix(rows), domain=sp.ZZ)
    assert diag == [abs(expect[k, k]) for k in range(len(diag))]


def test_invariant_factors_examples():
    assert invariant_factors(IntMatrix([[2, 0], [0, 3]])) == [1, 6]
    assert invariant_factors(IntMatrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])) == [2, 6, 12]


def test_inverse_unimodular():
    m = IntMatrix([[2, 1], [7, 4]])
    assert m @ inverse_unimodular(m) == IntMatrix.identity(2)
    with pytest.raises(ParameterError):
        inverse_unimodular(IntMatrix([[2, 0], [0, 1]]))


@settings(max_examples=60, deadline=None)
@given(rect)
def test_rational_nullspace_against_sympy(rows):
    ncols = len(rows[0])
    basis = nullspace([[Fraction(x) for x in r] for r in rows], ncols, Fraction(1))
    assert len(basis) == len(sp.Matrix(rows).nullspace())
    for v in basis:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


def test_solve_inconsistent_system():
    assert solve([[Fraction(1), Fraction(1)], [Fraction(2), Fraction(2)]], [Fraction(1), Fraction(3)]) is None
    assert solve([[Fraction(2), Fraction(0)], [Fraction(0), Fraction(4)]], [Fraction(1), Fraction(2)]) == [
        Fraction(1, 2), Fraction(1, 2)]


# ---------------------------------------------------------------------------
# polynomials

AB = ("a", "b")
poly_terms = st.dictionaries(
    st.tuples(st.integers(0, 6), st.integers(0, 6)), st.integers(-5, 5), max_size=6
)


def _to_sympy(p: MultiPoly):
    a, b = sp.symbols("a b")
    return sum((sp.Rational(c.rational_value()) * a**e[0] * b**e[1] for e, c in p.terms.items()), sp.Integer(0))


@settings(max_examples=100, deadline=None)
@given(poly_terms, poly_terms, st.integers(0, 4))
def test_ring_operations_match_sympy_expand(t1, t2, k):
    p, q = rational_poly(AB, t1), rational_poly(AB, t2)
    assert sp.expand(_to_sympy(p * q) - _to_sympy(p) * _to_sympy(q)) == 0
    assert sp.expand(_to_sympy(p - q) - (_to_sympy(p) - _to_sympy(q))) == 0
    assert sp.expand(_to_sympy(p**k) - _to_sympy(p) ** k) == 0


small_poly_terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-5, 5), max_size=4
)


@settings(max_examples=40, deadline=None)
@given(small_poly_terms, small_poly_terms, small_poly_terms)
def test_substitution_matches_sympy(t, u, v):
    p, f, g = rational_poly(AB, t), rational_poly(AB, u), rational_poly(AB, v)
    a, b = sp.symbols("a b")
    expect = sp.expand(_to_sympy(p).subs({a: _to_sympy(f), b: _to_sympy(g)}, simultaneous=True))
    assert sp.expand(_to_sympy(poly_substitute(p, {"a": f, "b": g})) - expect) == 0


def test_laurent_monomials_and_proportionality():
    t = MultiPoly.generators(("t0", "t1"))
    mono = t[0] * t[1] ** -2
    assert mono * t[1] ** 2 == t[0]
    with pytest.raises(ParameterError):
        (t[0] + t[1]) ** -1
    p = rational_poly(AB, {(2, 0): 1, (0, 2): 3})
    assert (p * Cyclotomic.zeta(4)).proportionality_constant(p) == Cyclotomic.zeta(4)
    assert p.proportionality_constant(rational_poly(AB, {(2, 0): 1, (0, 2): 4})) is None


def test_cyclotomic_polynomial_vanishes_at_its_root():
    phi = cyclotomic_polynomial(12)
    value = poly_substitute(phi, {"x": MultiPoly.constant(("u",), Cyclotomic.zeta(12))})
    assert value.is_zero()


def test_icosahedral_degree_sixty_identity_is_fast():
    """E^3 + F^2 = 1728 D'^5 for the icosahedral invariants, all of degree 60."""
    a, b = MultiPoly.generators(AB)
    start = time.perf_counter()
    d = a * b * (a**10 + 11 * a**5 * b**5 - b**10)
    e = -(a**20 + b**20) + 228 * (a**15 * b**5 - a**5 * b**15) - 494 * a**10 * b**10
    f = a**30 + b**30 + 522 * (a**25 * b**5 - a**5 * b**25) - 10005 * (a**20 * b**10 + a**10 * b**20)
    lhs = e**3 + f**2
    elapsed = time.perf_counter() - start
    assert lhs == 1728 * d**5
    assert lhs.total_degree() == 60
    assert elapsed < 5.0
    sa, sb = sp.symbols("a b")
    assert sp.expand(_to_sympy(lhs) - 1728 * (sa * sb * (sa**10 + 11 * sa**5 * sb**5 - sb**10)) ** 5) == 0
