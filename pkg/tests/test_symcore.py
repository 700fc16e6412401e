from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lieformal.symcore import DimensionMismatch, Polynomial
from strategies import polynomials


def x(i, n=2):
    return Polynomial.variable(n, i)


def test_additive_inverse_is_zero():
    p = x(1) ** 2
    assert (p + (-p)).is_zero()
    assert (p - p) == 0


def test_power_rule():
    p = x(1) ** 2 * x(2)
    assert p.diff(1) == 2 * x(1) * x(2)


def test_difference_of_squares():
    # expanded by hand: x1^2 - x1 x2 + x2 x1 - x2^2
    lhs = (x(1) + x(2)) * (x(1) - x(2))
    assert lhs == Polynomial(2, {(2, 0): 1, (0, 2): -1})


def test_no_zero_coefficients_are_stored():
    p = Polynomial(2, {(1, 0): 1, (0, 1): 0})
    assert p.terms == {(1, 0): Fraction(1)}
    assert (p - p).terms == {}


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        x(1, 2) + x(1, 3)


def test_degree_and_constant():
    assert Polynomial.zero(3).degree() == -1
    p = x(1, 3) ** 2 * x(3, 3) + 5
    assert p.degree() == 3
    assert p.constant_term() == 5


def test_variable_index_range():
    with pytest.raises(IndexError):
        Polynomial.variable(2, 3)
    with pytest.raises(IndexError):
        x(1).diff(0)


def test_floats_are_refused():
    with pytest.raises(TypeError):
        x(1) * 0.5


def test_hash_matches_equality():
    a = (x(1) + 1) ** 2
    b = x(1) ** 2 + 2 * x(1) + 1
    assert a == b and hash(a) == hash(b)


@given(polynomials(3, rational=True), polynomials(3, rational=True), polynomials(3))
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p


@given(polynomials(4, max_degree=5, max_terms=5), st.integers(1, 4), st.integers(1, 4))
def test_partials_commute(p, i, j):
    assert p.diff(i).diff(j) == p.diff(j).diff(i)


@given(polynomials(3), polynomials(3), st.integers(1, 3))
def test_leibniz_rule(p, q, i):
    assert (p * q).diff(i) == p.diff(i) * q + p * q.diff(i)


@given(polynomials(2, max_degree=2, max_terms=3), st.integers(0, 4))
def test_power_by_repeated_product(p, k):
    expected = Polynomial.constant(2, 1)
    for _ in range(k):
        expected = expected * p
    assert p ** k == expected
