"""Warped G2-structures ``phi = f omega ^ ds + (alpha psi+ - beta psi-)`` on M^6 x_f S^1.

Everything is computed in the orthonormal 7-frame ``(x^1..x^6, x^7 = f ds)``;
the warp ``f`` is constant on the base, so ``d x^7 = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coframe import d
from .exterior import FrameScaling, KForm, basis, contract, hodge, unit_star, wedge
from .scalars import FieldElem, TimeScalar
from .su3 import OMEGA, OMEGA2, PSI_MINUS, PSI_PLUS, SU3Structure, SU3Torsion, torsion

DIM = 7
X7 = KForm.mono(DIM, (7,))
VOL7 = KForm.mono(DIM, "1234567")


class StructuralError(ArithmeticError):
    """A torsion computation failed its reconstruction check."""


class PreconditionError(ValueError):
    """An operation was called outside the torsion class it requires."""


def embed(a: KForm) -> KForm:
    """View a base form as a form on the 7-frame."""
    return KForm._raw(DIM, a.degree, dict(a.terms))


def restrict(a: KForm) -> tuple:
    """Split a 7-form as ``base + rest ^ x^7``; returns ``(base, rest)`` on the base."""
    base, rest = {}, {}
    for idx, c in a.terms.items():
        if idx and idx[-1] == 7:
            rest[idx[:-1]] = c
        else:
            base[idx] = c
    deg = a.degree
    return (KForm._raw(6, deg, base) if deg <= 6 else KForm.zero(6, 6),
            KForm._raw(6, max(deg - 1, 0), rest))


def star6(a: KForm) -> KForm:
    return unit_star(a)


def star7(a: KForm) -> KForm:
    return unit_star(a)


def _ds(a: KForm) -> KForm:
    """``a ^ x^7`` for a base form ``a``."""
    return wedge(embed(a), X7)


def unit_circle(alpha, beta) -> tuple:
    alpha, beta = FieldElem.coerce(alpha), FieldElem.coerce(beta)
    if alpha * alpha + beta * beta != 1:
        raise ValueError(f"alpha^2 + beta^2 must equal 1, got alpha={alpha}, beta={beta}")
    return alpha, beta


@dataclass(frozen=True)
class WarpedG2Structure:
    base: SU3Structure
    alpha: FieldElem = FieldElem(1)
    beta: FieldElem = FieldElem(0)
    warp: TimeScalar | None = None  # f(t); None means f = 1

    def __post_init__(self):
        a, b = unit_circle(self.alpha, self.beta)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        if self.warp is not None and not self.warp.is_monomial():
            raise ValueError("the warp must be a single monomial")

    @property
    def frame(self):
        return self.base.frame.extended()

    @property
    def scaling(self) -> FrameScaling | None:
        if self.base.scaling is None:
            return None
        warp = self.warp if self.warp is not None else TimeScalar.const(1, self.base.scaling[1].k)
        return self.base.scaling.extend(warp)

    def static_scaling(self) -> FrameScaling:
        """Scaling of the full 7-frame relative to ``(h^1..h^6, ds)``."""
        base = self.base.scaling
        k = base[1].k if base is not None else (self.warp.k if self.warp is not None else 0)
        if base is None:
            base = FrameScaling.unit(6, k)
        warp = self.warp if self.warp is not None else TimeScalar.const(1, k)
        return base.extend(warp)

    def d(self, a: KForm) -> KForm:
        return d(a, self.frame, self.scaling)

    @property
    def psi_ab(self) -> KForm:
        """``alpha psi+ - beta psi-``."""
        return PSI_PLUS.scale(self.alpha) - PSI_MINUS.scale(self.beta)

    @property
    def psi_ba(self) -> KForm:
        """``alpha psi- + beta psi+``."""
        return PSI_MINUS.scale(self.alpha) + PSI_PLUS.scale(self.beta)


def phi(w: WarpedG2Structure) -> KForm:
    return _ds(OMEGA) + embed(w.psi_ab)


def star_phi_closed_form(w: WarpedG2Structure) -> KForm:
    """``1/2 omega^2 + (alpha psi- + beta psi+) ^ f ds`` in the 7-frame."""
    return embed(OMEGA2.scale(Fraction(1, 2))) + _ds(w.psi_ba)


def build_phi(w: WarpedG2Structure) -> tuple:
    """``(phi, *phi)`` in the 7-frame; the star is computed and checked against the closed form."""
    p = phi(w)
    sp = star7(p)
    if sp != star_phi_closed_form(w):
        raise StructuralError("Hodge star of phi disagrees with 1/2 omega^2 + f(alpha psi- + beta psi+)^ds")
    return p, sp


@dataclass
class G2Torsion:
    tau0: object
    tau1: KForm
    tau2: KForm
    tau3: KForm

    FIELDS = ("tau0", "tau1", "tau2", "tau3")

    def nonzero(self) -> list:
        return [n for n in self.FIELDS if getattr(self, n)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, G2Torsion):
            return NotImplemented
        t0a, t0b = self.tau0, other.tau0
        same0 = (not t0a and not t0b) or (t0a == t0b) or not (t0a - t0b)
        return same0 and self.tau1 == other.tau1 and self.tau2 == other.tau2 and self.tau3 == other.tau3


def _scalar_of(form: KForm):
    return form.terms.get((), 0)


def g2_reconstruct(tor: G2Torsion, p: KForm, sp: KForm) -> tuple:
    """``(d phi, d *phi)`` rebuilt from the torsion forms."""
    dphi = sp.scale(tor.tau0) + wedge(tor.tau1, p).scale(3) + star7(tor.tau3)
    dstar = wedge(tor.tau1, sp).scale(4) + wedge(tor.tau2, p)
    return dphi, dstar


def g2_torsion_direct(w: WarpedG2Structure) -> G2Torsion:
    p, sp = build_phi(w)
    dphi = w.d(p)
    dstar = w.d(sp)
    tau0 = _scalar_of(star7(wedge(dphi, p)))
    tau0 = tau0 * Fraction(1, 7) if tau0 else 0
    tau1 = star7(wedge(star7(dphi), p)).scale(Fraction(-1, 12))
    tau2 = -star7(dstar) + star7(wedge(tau1, sp)).scale(4)
    tau3 = star7(dphi) - p.scale(tau0) - star7(wedge(tau1, p)).scale(3)
    tor = G2Torsion(tau0, tau1, tau2, tau3)
    rdphi, rdstar = g2_reconstruct(tor, p, sp)
    if rdphi != dphi or rdstar != dstar:
        raise StructuralError("G2 torsion forms do not reproduce d phi and d *phi")
    if not in_lambda2_14(tau2, p) or not in_lambda3_27(tau3, p, sp):
        raise StructuralError("extracted tau2/tau3 fail their type conditions")
    return tor


def in_lambda2_14(s: KForm, p: KForm) -> bool:
    return wedge(s, p) == -star7(s)


def in_lambda3_27(g: KForm, p: KForm, sp: KForm) -> bool:
    return wedge(g, p).is_zero() and wedge(g, sp).is_zero()


def _lin(a, x, b, y):
    """``a*x + b*y`` for scalars that may be plain zeros."""
    out = 0
    if x:
        out = x * a if a else out
    if y and b:
        out = y * b + out
    return out


def g2_torsion_warped(tor: SU3Torsion, w: WarpedG2Structure) -> G2Torsion:
    """G2 torsion from the base SU(3) torsion, for a warp constant on the base."""
    al, be = w.alpha, w.beta
    s0, p0 = tor.sigma0, tor.pi0
    a_p0_b_s0 = _lin(al, p0, -be, s0)       # alpha pi0 - beta sigma0
    a_s0_b_p0 = _lin(al, s0, be, p0)        # alpha sigma0 + beta pi0
    eta1 = tor.pi1 + tor.nu1
    eta2 = tor.pi1 - tor.nu1.scale(2)
    eta3 = -tor.pi1 + tor.nu1
    psi_ab, psi_ba = w.psi_ab, w.psi_ba
    s2a = tor.sigma2.scale(al) + tor.pi2.scale(be)        # alpha sigma2 + beta pi2
    p2a = tor.pi2.scale(al) - tor.sigma2.scale(be)        # alpha pi2 - beta sigma2

    tau0 = a_p0_b_s0 * Fraction(12, 7) if a_p0_b_s0 else 0
    tau1 = X7.scale(a_s0_b_p0 * Fraction(1, 2) if a_s0_b_p0 else 0) + embed(eta1.scale(Fraction(1, 6)))
    tau2 = (embed(-s2a)
            + _ds(star6(wedge(eta2, OMEGA2)).scale(Fraction(1, 3)))
            - embed(star6(wedge(eta2, psi_ba)).scale(Fraction(1, 3))))
    inner = (OMEGA.scale(a_p0_b_s0 * Fraction(2, 7) if a_p0_b_s0 else 0)
             - star6(wedge(eta3, psi_ab)).scale(Fraction(1, 2))
             + p2a)
    tau3 = (_ds(inner)
            - embed(star6(wedge(eta3, OMEGA)).scale(Fraction(1, 2)))
            - embed(psi_ab.scale(a_p0_b_s0 * Fraction(3, 14) if a_p0_b_s0 else 0))
            - embed(star6(tor.nu3)))
    return G2Torsion(tau0, tau1, tau2, tau3)


G2_CLASSES = {
    (): "Parallel",
    ("tau0",): "NearlyParallel",
    ("tau2",): "Closed",
    ("tau3",): "CoclosedPureType",
    ("tau1",): "LocallyConformalParallel",
    ("tau0", "tau3"): "Coclosed",
}


def classify_g2(tor: G2Torsion) -> str:
    return G2_CLASSES.get(tuple(tor.nonzero()), "Other")


def warped_class_conditions(tor: SU3Torsion, alpha, beta) -> dict:
    """Conditions (i)-(ix) for a warp constant on the base, and the predicted vanishing of each tau."""
    al, be = unit_circle(alpha, beta)
    s0, p0 = tor.sigma0, tor.pi0
    eta1 = tor.pi1 + tor.nu1
    eta2 = tor.pi1 - tor.nu1.scale(2)
    eta3 = -tor.pi1 + tor.nu1
    conds = {
        "i": not _lin(al, p0, -be, s0),
        "ii": not _lin(al, s0, be, p0),
        "iii": eta1.is_zero(),
        "iv": eta2.is_zero(),
        "v": (tor.sigma2.scale(al) + tor.pi2.scale(be)).is_zero(),
        "vi": not _lin(al, p0, -be, s0),
        "vii": eta3.is_zero(),
        "viii": (tor.pi2.scale(al) - tor.sigma2.scale(be)).is_zero(),
        "ix": tor.nu3.is_zero(),
    }
    vanish = {
        "tau0": conds["i"],
        "tau1": conds["ii"] and conds["iii"],
        "tau2": conds["iv"] and conds["v"],
        "tau3": conds["vi"] and conds["vii"] and conds["viii"] and conds["ix"],
    }
    nonzero = tuple(n for n in G2Torsion.FIELDS if not vanish[n])
    return {"conditions": conds, "vanishing": vanish, "predicted_class": G2_CLASSES.get(nonzero, "Other")}


def check_class_conditions(w: WarpedG2Structure) -> dict:
    """Evaluate the conditions and cross-check against the direct torsion computation."""
    tor = torsion(w.base)
    report = warped_class_conditions(tor, w.alpha, w.beta)
    direct = g2_torsion_direct(w)
    actual = {n: not getattr(direct, n) for n in G2Torsion.FIELDS}
    report["direct_vanishing"] = actual
    report["direct_class"] = classify_g2(direct)
    report["agree"] = actual == report["vanishing"]
    return report


def metric_from_phi(w: WarpedG2Structure) -> tuple:
    """``g_ij`` from ``g vol7 = 1/6 (i_X phi)^(i_Y phi)^phi``; returns ``(matrix, constant or None)``."""
    p = phi(w)
    top = tuple(range(1, 8))
    g = []
    for i in range(1, 8):
        row = []
        for j in range(1, 8):
            val = wedge(wedge(contract(i, p), contract(j, p)), p).terms.get(top, 0)
            row.append(FieldElem.coerce(val) * Fraction(1, 6) if val else FieldElem(0))
        g.append(row)
    diag = {g[i][i] for i in range(7)}
    off = any(g[i][j] for i in range(7) for j in range(7) if i != j)
    constant = next(iter(diag)) if len(diag) == 1 and not off else None
    return g, constant


def lemma_star_identities(scaling6: FrameScaling, warp: TimeScalar) -> list:
    """Check ``*7 eta = f *6 eta ^ ds`` and ``*7 (eta ^ ds) = (-1)^k f^-1 *6 eta`` on every monomial.

    Forms are in the static frame ``(h^1..h^6, ds)``. Returns the failing
    ``(identity, index)`` pairs; empty means all hold.
    """
    s7 = scaling6.extend(warp)
    ds = KForm.mono(DIM, (7,))
    finv = warp.inverse()
    failures = []
    for k in range(0, 7):
        for idx in basis(6, k):
            eta6 = KForm.mono(6, idx, TimeScalar.const(1, warp.k))
            eta7 = embed(eta6)
            star6_eta = hodge(eta6, scaling6)
            lhs1 = hodge(eta7, s7)
            rhs1 = wedge(embed(star6_eta.scale(warp)), ds)
            if lhs1 != rhs1:
                failures.append(("star7 eta", idx))
            lhs2 = hodge(wedge(eta7, ds), s7)
            rhs2 = embed(star6_eta.scale(finv * (-1) ** k))
            if lhs2 != rhs2:
                failures.append(("star7 eta^ds", idx))
    return failures
