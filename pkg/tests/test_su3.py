from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import forms
from g2flow import coframe
from g2flow.exterior import FrameScaling, KForm, unit_star, wedge
from g2flow.su3 import (OMEGA, OMEGA3, PSI_MINUS, PSI_PLUS, SU3Structure, classify_su3, decompose2, decompose3,
                        in_lambda2_8, in_lambda3_12, lambda2_8, lambda3_12, metric_from_forms, reconstruct, torsion)

SHF = ["e11+e11", "g5,1+R", "A5,7", "g6,N3", "g6,38", "g6,54", "g6,118", "A5,17"]
BAL = ["h2", "h3", "h4", "h5", "h6", "h19-"]


def test_compatibility_invariants():
    s = SU3Structure(coframe.get("h2"))
    assert all(r.is_zero() for r in s.check_invariants().values())
    assert wedge(PSI_PLUS, PSI_MINUS) == OMEGA3.scale(Fraction(2, 3))


def test_psi_minus_is_star_psi_plus():
    assert unit_star(PSI_PLUS) == PSI_MINUS


def test_dimension_counts():
    assert len(lambda2_8()) == 8
    assert len(lambda3_12()) == 12


def test_su2_su2_nearly_kahler():
    tor = torsion(SU3Structure(coframe.get("su2+su2")))
    assert classify_su3(tor) == ("NearlyKahler", ("sigma0",))
    assert tor.sigma0 == -2


@pytest.mark.parametrize("name", SHF)
def test_symplectic_half_flat(name):
    tor = torsion(SU3Structure(coframe.get(name)))
    assert classify_su3(tor)[0] == "SymplecticHalfFlat"
    assert in_lambda2_8(tor.sigma2)


@pytest.mark.parametrize("name", BAL)
def test_balanced(name):
    tor = torsion(SU3Structure(coframe.get(name)))
    assert classify_su3(tor)[0] == "Balanced"
    assert in_lambda3_12(tor.nu3)


def test_h3_nu3():
    tor = torsion(SU3Structure(coframe.get("h3")))
    assert tor.nu3 == KForm.from_terms(6, {"125": 2, "345": -2})


def test_abelian_is_calabi_yau(abelian):
    assert classify_su3(torsion(SU3Structure(abelian)))[0] == "CalabiYau"


@pytest.mark.parametrize("name", coframe.catalog_names())
def test_reconstruction_and_type_membership(name):
    s = SU3Structure(coframe.get(name))
    tor = torsion(s)
    assert reconstruct(tor) == (s.d(OMEGA), s.d(PSI_PLUS), s.d(PSI_MINUS))
    assert in_lambda2_8(tor.pi2) and in_lambda2_8(tor.sigma2) and in_lambda3_12(tor.nu3)


@pytest.mark.parametrize("name", ["g5,1+R", "h19-", "su2+su2"])
def test_torsion_with_time_dependent_frame(name):
    scaling = FrameScaling.potential(-3, [Fraction(1, 6), Fraction(-1, 6)] * 3)
    s = SU3Structure(coframe.get(name), scaling)
    tor = torsion(s)
    assert reconstruct(tor) == (s.d(OMEGA), s.d(PSI_PLUS), s.d(PSI_MINUS))


@settings(max_examples=40)
@given(forms(degree=2, max_terms=6))
def test_two_form_decomposition_round_trip(sigma):
    f, p6, p8 = decompose2(sigma)
    assert OMEGA.scale(f) + p6 + p8 == sigma
    assert in_lambda2_8(p8)


@settings(max_examples=40)
@given(forms(degree=3, max_terms=8))
def test_three_form_decomposition_round_trip(gamma):
    a, b, eta, g12 = decompose3(gamma)
    assert PSI_PLUS.scale(a) + PSI_MINUS.scale(b) + wedge(eta, OMEGA) + g12 == gamma
    assert in_lambda3_12(g12)


def test_metric_recovery_constant():
    g, constant = metric_from_forms()
    assert constant == 6
