from fractions import Fraction

import pytest
from hypothesis import strategies as st

from g2flow import coframe
from g2flow.exterior import KForm, basis
from g2flow.scalars import FieldElem, TimeScalar

ABELIAN = "(0,0,0,0,0,0)"


def small_fractions(bound=6, max_den=4):
    return st.builds(Fraction, st.integers(-bound, bound), st.integers(1, max_den))


@st.composite
def field_elems(draw, bound=5):
    return FieldElem(*(draw(small_fractions(bound)) for _ in range(4)))


@st.composite
def time_scalars(draw, k=Fraction(-3, 2), max_terms=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        p = draw(small_fractions(3, 3))
        r = draw(st.sampled_from([0, 0, 1, -2]))
        terms[(p, r)] = draw(small_fractions(4, 3))
    return TimeScalar(k, terms)


@st.composite
def forms(draw, dim=6, degree=None, coeffs=None, max_terms=4):
    if degree is None:
        degree = draw(st.integers(0, dim))
    coeffs = coeffs if coeffs is not None else small_fractions(4, 3)
    idxs = basis(dim, degree)
    chosen = draw(st.lists(st.sampled_from(idxs), max_size=max_terms, unique=True))
    return KForm(dim, degree, {i: draw(coeffs) for i in chosen})


@pytest.fixture(scope="session")
def catalog():
    return coframe.catalog()


@pytest.fixture(scope="session")
def abelian():
    return coframe.parse_structure_equations(ABELIAN, 6, "abelian")
