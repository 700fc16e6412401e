"""Hypothesis strategies for polynomials, forms and polyvectors."""

from fractions import Fraction

from hypothesis import strategies as st

from lieformal.exterior import DifferentialForm, Polyvector
from lieformal.symcore import Polynomial

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
small_ints = st.integers(min_value=-4, max_value=4)


def monomials(n, max_degree=3):
    def build(coords):
        m = [0] * n
        for i in coords:
            m[i] += 1
        return tuple(m)

    return st.lists(st.integers(0, n - 1), max_size=max_degree).map(build)


def polynomials(n, max_degree=3, max_terms=4, rational=False):
    c = coeffs if rational else small_ints
    return st.dictionaries(monomials(n, max_degree), c, max_size=max_terms).map(
        lambda t: Polynomial(n, t)
    )


def index_sets(n, k=None):
    if k is None:
        return st.sets(st.integers(1, n), max_size=n).map(lambda s: tuple(sorted(s)))
    return st.sets(st.integers(1, n), min_size=k, max_size=k).map(lambda s: tuple(sorted(s)))


def _multivector(cls, n, k, max_degree, max_terms):
    term = st.tuples(index_sets(n, k), polynomials(n, max_degree, 2))

    def build(terms):
        out = cls.zero(n)
        for idx, p in terms:
            out = out + cls.basis(n, idx, p)
        return out

    return st.lists(term, max_size=max_terms).map(build)


def forms(n, k=None, max_degree=2, max_terms=3):
    return _multivector(DifferentialForm, n, k, max_degree, max_terms)


def polyvectors(n, k=None, max_degree=2, max_terms=3):
    return _multivector(Polyvector, n, k, max_degree, max_terms)


def vector_fields(n, max_degree=2):
    return polyvectors(n, 1, max_degree, n)


def fraction(a, b=1):
    return Fraction(a, b)
