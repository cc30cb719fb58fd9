from fractions import Fraction

import pytest

from g2flow import coframe
from g2flow.exterior import KForm
from g2flow.scalars import FieldElem


def test_catalog_size_and_order():
    names = coframe.catalog_names()
    assert len(names) == 15
    assert names[0] == "su2+su2" and names[-1] == "h19-"


@pytest.mark.parametrize("name", coframe.catalog_names())
def test_jacobi_identity(name):
    assert coframe.validate(coframe.get(name)).ok


@pytest.mark.parametrize("a", [Fraction(1), Fraction(2), Fraction(-1, 3)])
def test_a517_family_is_a_lie_algebra(a):
    assert coframe.validate(coframe.a517(a)).ok


def test_a517_rejects_zero():
    with pytest.raises(ValueError):
        coframe.a517(0)


def test_broken_structure_equations_fail_jacobi():
    # d(dh^1) = -h^2 ^ dh^3 = -h^{245}
    frame = coframe.parse_structure_equations("(h23,0,h45,0,0,0)", 6, "broken")
    report = coframe.validate(frame)
    assert not report.ok
    assert [i for i, _ in report.failures()] == [1]
    assert report.failures()[0][1] == KForm.mono(6, "245", -1)


def test_su2_su2_matches_recomputed_basis_change():
    derived = coframe.su2_su2_from_lambda_nu()
    catalog = coframe.get("su2+su2").d_table()
    assert derived == catalog


def test_h3_rendering():
    assert coframe.get("h3").render() == "(0,0,0,0,0,-2h12+2h34)"


def test_aliases_resolve():
    assert coframe.get("e(1,1)+e(1,1)").name == "e11+e11"
    assert coframe.get("g6,54^{0,-1}").name == "g6,54"


def test_unknown_algebra_lists_names():
    with pytest.raises(coframe.UnknownAlgebra) as info:
        coframe.get("bogus")
    assert "h19-" in str(info.value)


@pytest.mark.parametrize("name", ["h2", "h3", "h4", "h5", "h6", "h19-", "g5,1+R", "g6,N3"])
def test_nilpotent_members(name):
    assert coframe.get(name).is_nilpotent()


@pytest.mark.parametrize("name", ["su2+su2", "A5,7", "g6,118"])
def test_non_nilpotent_members(name):
    assert not coframe.get(name).is_nilpotent()


def test_d_of_generator_reads_structure_equation():
    frame = coframe.get("h3")
    assert coframe.d(KForm.mono(6, (6,)), frame) == KForm.from_terms(6, {"12": -2, "34": 2})


def test_radical_coefficients_survive():
    frame = coframe.get("g6,54")
    assert frame.entry_map(1)[(1, 6)] == FieldElem(0, Fraction(1, 2))
