import math
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import forms, small_fractions
from g2flow import coframe
from g2flow.coframe import d
from g2flow.exterior import (DimensionError, FrameScaling, KForm, basis, contract, ddt_form, from_static, hodge,
                             inner_product_coeff, perm_sign, to_static, unit_star, wedge)
from g2flow.scalars import TimeScalar, ts_eval


def _swap_count_sign(seq):
    """Sign by counting swaps of a selection sort; independent of inversion counting."""
    items = list(seq)
    if len(set(items)) != len(items):
        return 0
    sign = 1
    for i in range(len(items)):
        j = min(range(i, len(items)), key=items.__getitem__)
        if j != i:
            items[i], items[j] = items[j], items[i]
            sign = -sign
    return sign


@given(st.lists(st.integers(1, 7), max_size=7))
def test_perm_sign_matches_swap_count(seq):
    assert perm_sign(seq) == _swap_count_sign(seq)


def test_basis_sizes():
    assert [len(basis(7, k)) for k in range(8)] == [math.comb(7, k) for k in range(8)]


@given(forms(degree=None), forms(degree=None))
def test_graded_anticommutativity(a, b):
    assert wedge(a, b) == wedge(b, a).scale((-1) ** (a.degree * b.degree))


@given(forms(max_terms=3), forms(max_terms=3), forms(max_terms=3))
def test_wedge_associative(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@given(forms(dim=7, degree=None))
def test_star_star_sign(a):
    k = a.degree
    assert unit_star(unit_star(a)) == a.scale((-1) ** (k * (7 - k)))


@given(forms(dim=6, degree=None))
def test_star_star_sign_even_dimension(a):
    k = a.degree
    assert unit_star(unit_star(a)) == a.scale((-1) ** (k * (6 - k)))


@given(st.integers(0, 6).flatmap(lambda k: st.tuples(forms(degree=k), forms(degree=k))))
def test_star_defines_inner_product(pair):
    a, b = pair
    top = wedge(a, unit_star(b)).terms.get(tuple(range(1, 7)), 0)
    assert top == inner_product_coeff(a, b)


@given(st.integers(1, 6), forms(degree=None, max_terms=3), forms(degree=None, max_terms=3))
def test_contraction_is_antiderivation(i, a, b):
    if a.degree == 0 or a.degree + b.degree > 6 or b.degree == 0:
        return
    lhs = contract(i, wedge(a, b))
    rhs = wedge(contract(i, a), b) + wedge(a, contract(i, b)).scale((-1) ** a.degree)
    assert lhs == rhs


def test_contract_zero_form_rejected():
    with pytest.raises(DimensionError):
        contract(1, KForm.scalar(6, 1))


@pytest.mark.parametrize("name", ["su2+su2", "g6,54", "h2", "g6,118"])
@settings(max_examples=25, deadline=None)
@given(a=forms(degree=None, max_terms=3), b=forms(degree=None, max_terms=3))
def test_leibniz_rule(name, a, b):
    frame = coframe.get(name)
    lhs = d(wedge(a, b), frame)
    rhs = wedge(d(a, frame), b) + wedge(a, d(b, frame)).scale((-1) ** a.degree)
    assert lhs == rhs


@pytest.mark.parametrize("name", coframe.catalog_names())
def test_d_squared_vanishes_on_all_monomials(name):
    frame = coframe.get(name)
    for k in range(0, 5):
        for idx in basis(6, k):
            assert d(d(KForm.mono(6, idx), frame), frame).is_zero()


SCALING = FrameScaling.potential(-3, [Fraction(1, 6), Fraction(-1, 6), Fraction(1, 2), 0, Fraction(-1, 3), 1])


@given(forms(degree=None, coeffs=small_fractions(3, 2)))
def test_static_round_trip(a):
    a = a.map_coeffs(lambda c: TimeScalar.const(c, -3))
    assert from_static(to_static(a, SCALING), SCALING) == a


def test_scaled_star_on_static_monomial():
    # *(h^1) for the metric sum f_i^2 (h^i)^2 is (f_2...f_6 / f_1) h^{23456}
    one = TimeScalar.const(1, -3)
    h1 = KForm.mono(6, (1,), one)
    expected = KForm.mono(6, (2, 3, 4, 5, 6), SCALING.factor((2, 3, 4, 5, 6)) * SCALING[1].inverse())
    assert hodge(h1, SCALING) == expected


@pytest.mark.parametrize("name", ["g5,1+R", "h19-", "g6,38"])
def test_scaled_d_commutes_with_frame_change(name):
    # d in the x-frame must agree with d of the static form
    frame = coframe.get(name)
    for k in (1, 2, 3):
        for idx in basis(6, k)[:8]:
            a = KForm.mono(6, idx, TimeScalar.const(1, -3))
            lhs = to_static(d(a, frame, SCALING), SCALING)
            rhs = d(to_static(a, SCALING), frame)
            assert lhs == rhs


def test_ddt_form_matches_finite_difference():
    one = TimeScalar.const(1, -3)
    a = KForm(6, 3, {(1, 3, 5): one, (2, 4, 6): TimeScalar.power(-3, 2, 5)})
    static = to_static(ddt_form(a, SCALING), SCALING)
    base = to_static(a, SCALING)
    t, h = 0.05, 1e-6
    for idx, c in base.terms.items():
        numeric = (ts_eval(c, t + h) - ts_eval(c, t - h)) / (2 * h)
        assert math.isclose(ts_eval(static.terms[idx], t), numeric, rel_tol=1e-6)


def test_dimension_mismatch_rejected():
    with pytest.raises(DimensionError):
        KForm.mono(6, "12") + KForm.mono(7, "12")


def test_render_is_ordered():
    a = KForm.from_terms(6, {"246": -1, "135": 1})
    assert a.render() == "x^{135} -x^{246}"


def test_mono_sorts_with_sign():
    assert KForm.mono(6, "21") == KForm.mono(6, "12", -1)


def test_permutation_sign_exhaustive_small():
    for p in permutations(range(1, 5)):
        assert perm_sign(p) == _swap_count_sign(p)
