"""SU(3)-structures on 6-dimensional coframes.

The structure is always the model one in the (time-scaled) x-frame::

    omega = x12 + x34 + x56
    psi+  = x135 - x146 - x236 - x245
    psi-  = x136 + x145 + x235 - x246

so the type decompositions are fixed rational linear maps. The irreducible
pieces are characterised by wedge conditions only (no almost complex
structure acting on forms is used).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .coframe import Coframe, d
from .exterior import FrameScaling, KForm, basis, contract, from_vector, unit_star, vector, wedge

DIM = 6

OMEGA = KForm.from_terms(DIM, {"12": 1, "34": 1, "56": 1})
PSI_PLUS = KForm.from_terms(DIM, {"135": 1, "146": -1, "236": -1, "245": -1})
PSI_MINUS = KForm.from_terms(DIM, {"136": 1, "145": 1, "235": 1, "246": -1})
OMEGA2 = wedge(OMEGA, OMEGA)
OMEGA3 = wedge(OMEGA2, OMEGA)
VOL6 = KForm.mono(DIM, "123456")


class TorsionInconsistency(ArithmeticError):
    """The exterior derivatives do not fit the SU(3) torsion equations."""


def _x(i: int) -> KForm:
    return KForm.mono(DIM, (i,))


def _rat(form: KForm) -> list:
    return [Fraction(c) if not hasattr(c, "rational") else c.rational() for c in vector(form)]


def _kernel_basis(forms_of, degree: int) -> list:
    """Basis of the subspace of ``degree``-forms annihilated by the maps ``forms_of``."""
    rows = []
    idx_list = basis(DIM, degree)
    columns = []
    for idx in idx_list:
        e = KForm.mono(DIM, idx)
        columns.append([c for f in forms_of for c in _rat(f(e))])
    rows = linalg.transpose(columns)
    return [from_vector(DIM, degree, v) for v in linalg.nullspace(rows, len(idx_list))]


@lru_cache(maxsize=None)
def lambda2_8() -> tuple:
    """Basis of {s : s ^ psi+ = 0, s ^ omega^2 = 0}."""
    return tuple(_kernel_basis([lambda s: wedge(s, PSI_PLUS), lambda s: wedge(s, OMEGA2)], 2))


@lru_cache(maxsize=None)
def lambda2_6() -> tuple:
    """Basis ``*(x^i ^ psi+)``, i = 1..6."""
    return tuple(unit_star(wedge(_x(i), PSI_PLUS)) for i in range(1, DIM + 1))


@lru_cache(maxsize=None)
def lambda3_12() -> tuple:
    """Basis of {g : g ^ omega = 0, g ^ psi+ = 0, g ^ psi- = 0}."""
    return tuple(_kernel_basis(
        [lambda g: wedge(g, OMEGA), lambda g: wedge(g, PSI_PLUS), lambda g: wedge(g, PSI_MINUS)], 3))


def _solver(columns: list) -> list:
    """Inverse of the square matrix whose columns are the given forms."""
    mat = linalg.transpose([_rat(c) for c in columns])
    return linalg.inverse(mat)


@lru_cache(maxsize=None)
def _dec2():
    return _solver([OMEGA, *lambda2_6(), *lambda2_8()])


@lru_cache(maxsize=None)
def _dec3():
    return _solver([PSI_PLUS, PSI_MINUS, *(wedge(_x(i), OMEGA) for i in range(1, 7)), *lambda3_12()])


@lru_cache(maxsize=None)
def _dpsi_system(sign: int):
    psi = PSI_PLUS if sign > 0 else PSI_MINUS
    cols = [OMEGA2, *(wedge(_x(i), psi) for i in range(1, 7)), *(-wedge(b, OMEGA) for b in lambda2_8())]
    return _solver(cols)


def _combine(coeffs, forms, dim=DIM, degree=None) -> KForm:
    out = KForm.zero(dim, degree if degree is not None else forms[0].degree)
    for c, f in zip(coeffs, forms):
        if c:
            out = out + f.scale(c)
    return out


def _one_form(coeffs) -> KForm:
    return KForm(DIM, 1, {(i,): c for i, c in enumerate(coeffs, start=1) if c})


@dataclass(frozen=True)
class SU3Structure:
    """Model SU(3)-structure on ``frame`` with frame scaling ``scaling`` (None = static)."""

    frame: Coframe
    scaling: FrameScaling | None = None

    def __post_init__(self):
        if self.frame.dim != DIM:
            raise ValueError("an SU(3)-structure needs a 6-dimensional coframe")

    omega = OMEGA
    psi_plus = PSI_PLUS
    psi_minus = PSI_MINUS

    def d(self, a: KForm) -> KForm:
        return d(a, self.frame, self.scaling)

    def check_invariants(self) -> dict:
        """The algebraic compatibility conditions, each as a residual form."""
        return {
            "omega^psi+": wedge(OMEGA, PSI_PLUS),
            "omega^psi-": wedge(OMEGA, PSI_MINUS),
            "psi+^psi- - 2/3 omega^3": wedge(PSI_PLUS, PSI_MINUS) - OMEGA3.scale(Fraction(2, 3)),
        }


def decompose2(sigma: KForm, s: SU3Structure | None = None) -> tuple:
    """``sigma = f*omega + part6 + part8``; returns ``(f, part6, part8)``."""
    c = linalg.apply(_dec2(), vector(sigma))
    return c[0], _combine(c[1:7], lambda2_6()), _combine(c[7:], lambda2_8())


def decompose3(gamma: KForm, s: SU3Structure | None = None) -> tuple:
    """``gamma = a psi+ + b psi- + eta^omega + g12``; returns ``(a, b, eta, g12)``."""
    c = linalg.apply(_dec3(), vector(gamma))
    return c[0], c[1], _one_form(c[2:8]), _combine(c[8:], lambda3_12())


def solve_dpsi(form: KForm, sign: int) -> tuple:
    """Solve ``form = s0 omega^2 + p1 ^ psi - p2 ^ omega`` for ``(s0, p1, p2)``."""
    c = linalg.apply(_dpsi_system(sign), vector(form))
    return c[0], _one_form(c[1:7]), _combine(c[7:], lambda2_8())


@dataclass
class SU3Torsion:
    sigma0: object
    pi0: object
    pi1: KForm
    nu1: KForm
    pi2: KForm
    sigma2: KForm
    nu3: KForm

    FIELDS = ("sigma0", "pi0", "pi1", "nu1", "pi2", "sigma2", "nu3")

    def nonzero(self) -> list:
        return [name for name in self.FIELDS if getattr(self, name)]

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.FIELDS}


def reconstruct(tor: SU3Torsion) -> tuple:
    """``(d omega, d psi+, d psi-)`` rebuilt from torsion forms."""
    dw = (PSI_PLUS.scale(tor.sigma0 * Fraction(-3, 2)) + PSI_MINUS.scale(tor.pi0 * Fraction(3, 2))
          + wedge(tor.nu1, OMEGA) + tor.nu3)
    dpp = OMEGA2.scale(tor.pi0) + wedge(tor.pi1, PSI_PLUS) - wedge(tor.pi2, OMEGA)
    dpm = OMEGA2.scale(tor.sigma0) + wedge(tor.pi1, PSI_MINUS) - wedge(tor.sigma2, OMEGA)
    return dw, dpp, dpm


def _diff(a, b) -> bool:
    return bool(a - b) if (a or b) else False


def torsion(s: SU3Structure) -> SU3Torsion:
    dw = s.d(OMEGA)
    dpp = s.d(PSI_PLUS)
    dpm = s.d(PSI_MINUS)
    a, b, nu1, nu3 = decompose3(dw)
    sigma0 = a * Fraction(-2, 3) if a else 0
    pi0 = b * Fraction(2, 3) if b else 0
    pi0_b, pi1, pi2 = solve_dpsi(dpp, +1)
    sigma0_b, pi1_b, sigma2 = solve_dpsi(dpm, -1)
    if _diff(sigma0, sigma0_b):
        raise TorsionInconsistency(f"sigma0 from d omega ({sigma0}) differs from d psi- ({sigma0_b})")
    if _diff(pi0, pi0_b):
        raise TorsionInconsistency(f"pi0 from d omega ({pi0}) differs from d psi+ ({pi0_b})")
    if pi1 != pi1_b:
        raise TorsionInconsistency("pi1 from d psi+ and d psi- disagree")
    tor = SU3Torsion(sigma0, pi0, pi1, nu1, pi2, sigma2, nu3)
    rdw, rdpp, rdpm = reconstruct(tor)
    if rdw != dw or rdpp != dpp or rdpm != dpm:
        raise TorsionInconsistency("torsion forms do not reproduce d omega, d psi+, d psi-")
    return tor


CLASSES = {
    (): "CalabiYau",
    ("sigma0",): "NearlyKahler",
    ("sigma2",): "SymplecticHalfFlat",
    ("nu3",): "Balanced",
}


def classify_su3(tor: SU3Torsion) -> tuple:
    """Return ``(label, nonzero torsion names)``."""
    nz = tuple(tor.nonzero())
    label = CLASSES.get(nz)
    if label is None:
        label = "Other(" + ",".join(nz) + ")"
    return label, nz


def in_lambda2_8(sigma: KForm) -> bool:
    return wedge(sigma, PSI_PLUS).is_zero() and wedge(sigma, OMEGA2).is_zero()


def in_lambda3_12(gamma: KForm) -> bool:
    return all(wedge(gamma, f).is_zero() for f in (OMEGA, PSI_PLUS, PSI_MINUS))


def metric_from_forms() -> tuple:
    """Bilinear form ``g_ij`` defined by ``g vol6 = -3 (i_X omega)^(i_Y psi+)^psi+``.

    Returns ``(matrix, constant)`` where ``constant`` is the common diagonal
    value when the matrix is a multiple of the identity, else ``None``.
    """
    g = []
    for i in range(1, DIM + 1):
        row = []
        for j in range(1, DIM + 1):
            top = wedge(wedge(contract(i, OMEGA), contract(j, PSI_PLUS)), PSI_PLUS)
            row.append(Fraction(-3) * Fraction(top.terms.get(tuple(range(1, 7)), 0)))
        g.append(row)
    diag = {g[i][i] for i in range(DIM)}
    off = any(g[i][j] for i in range(DIM) for j in range(DIM) if i != j)
    constant = diag.pop() if len(diag) == 1 and not off else None
    return g, constant
