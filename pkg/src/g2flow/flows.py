"""Hodge Laplacian on the warped 7-frame, Laplacian coflow residuals and the potential-ansatz solver.

The ansatz is ``x^i(t) = (1+kt)^{a_i} h^i`` for the base and a warp
``f = c (1+kt)^b`` (or ``c e^{ut}`` when ``k = 0``). Writing ``v_i = k a_i``
and ``u = k b`` every condition becomes linear in ``z = (v_1..v_6, u, k)``:
a monomial ``r (1+kt)^{m.a}`` balances the frame velocity ``l(z)/(1+kt)``
only if ``m.v + k = 0``, and monomials sharing an exponent satisfy
``(m - m').v = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations

from . import linalg
from .coframe import Coframe, d, get
from .exterior import FrameScaling, KForm, basis, ddt_form, unit_star, wedge
from .g2warp import PreconditionError, WarpedG2Structure, _ds, build_phi, embed, phi, star_phi_closed_form
from .scalars import AnsatzScalar, FieldElem, TimeScalar, as_fraction, render_rational
from .su3 import OMEGA, OMEGA2, PSI_MINUS, PSI_PLUS, SU3Structure, classify_su3, torsion

NVARS = 6
Z_NAMES = ("v1", "v2", "v3", "v4", "v5", "v6", "u", "k")
NZ = len(Z_NAMES)
U, K = 6, 7

SHF = "SymplecticHalfFlat"
BALANCED = "Balanced"
NEARLY_KAHLER = "NearlyKahler"
CLASS_ALIASES = {"shf": SHF, "balanced": BALANCED, "nk": NEARLY_KAHLER,
                 SHF: SHF, BALANCED: BALANCED, NEARLY_KAHLER: NEARLY_KAHLER}


# Laplacian ------------------------------------------------------------------

def codifferential(a: KForm, w: WarpedG2Structure) -> KForm:
    """``delta = (-1)^k * d *`` on k-forms in dimension 7."""
    if a.degree == 0:
        return KForm.zero(7, 0)
    out = unit_star(w.d(unit_star(a)))
    return out if a.degree % 2 == 0 else -out


def laplacian7(a: KForm, w: WarpedG2Structure) -> KForm:
    """Hodge Laplacian ``d delta + delta d`` at frozen ``t`` in the orthonormal 7-frame."""
    da = w.d(a) if a.degree < 7 else KForm.zero(7, 7)
    out = KForm.zero(7, a.degree)
    if a.degree > 0:
        out = out + w.d(codifferential(a, w))
    if a.degree < 7:
        out = out + codifferential(da, w)
    return out


def _require_closed(w: WarpedG2Structure) -> None:
    if not w.d(phi(w)).is_zero():
        raise PreconditionError("phi is not closed on this base and orientation")


def _require_coclosed(w: WarpedG2Structure) -> None:
    if not w.d(star_phi_closed_form(w)).is_zero():
        raise PreconditionError("phi is not coclosed on this base and orientation")


def _combo(a, x, b, y):
    """``a x + b y`` for ring elements ``x, y`` that may be plain zero."""
    out = 0
    if x and a:
        out = x * a
    if y and b:
        out = y * b + out
    return out


def laplacian_closed_formula(w: WarpedG2Structure) -> KForm:
    """``-d6(alpha sigma2 + beta pi2)`` for closed phi and constant warp."""
    _require_closed(w)
    tor = torsion(w.base)
    out = embed(-w.base.d(tor.sigma2.scale(w.alpha) + tor.pi2.scale(w.beta)))
    direct = laplacian7(phi(w), w)
    if out != direct:
        raise ArithmeticError("closed-case Laplacian formula disagrees with the Hodge Laplacian")
    return out


def laplacian_coclosed_formula(w: WarpedG2Structure) -> KForm:
    """Closed-form ``Delta *phi`` for coclosed phi with constant warp.

    ``A = alpha pi0 - beta sigma0`` and ``B = alpha pi2 - beta sigma2`` are
    constant on the base, so their base differentials vanish.
    """
    _require_coclosed(w)
    tor = torsion(w.base)
    al, be = w.alpha, w.beta
    A = _combo(al, tor.pi0, -be, tor.sigma0)
    B = tor.pi2.scale(al) - tor.sigma2.scale(be)
    base = (OMEGA2.scale(A * A if A else 0) - wedge(B, OMEGA).scale(A)).scale(Fraction(3, 2))
    base = base - w.base.d(unit_star(tor.nu3))
    inner = (PSI_PLUS.scale(-3 * tor.sigma0 if tor.sigma0 else 0)
             + PSI_MINUS.scale(3 * tor.pi0 if tor.pi0 else 0)
             + tor.nu3.scale(2)).scale(A) + w.base.d(B)
    out = embed(base) + _ds(inner)
    direct = laplacian7(star_phi_closed_form(w), w)
    if out != direct:
        raise ArithmeticError("coclosed-case Laplacian formula disagrees with the Hodge Laplacian")
    return out


def assemble_flow_system_closed(w: WarpedG2Structure) -> str:
    """The Laplacian flow of a closed warped structure as two rendered equations."""
    _require_closed(w)
    tor = torsion(w.base)
    rhs = -w.base.d(tor.sigma2.scale(w.alpha) + tor.pi2.scale(w.beta))
    lhs2 = []
    if w.alpha:
        lhs2.append(f"{_coef(w.alpha)}d/dt psi+")
    if w.beta:
        lhs2.append(f"{_coef(-w.beta, signed=bool(lhs2))}d/dt psi-")
    return "\n".join([
        "f' omega + f d/dt omega = 0",
        f"{' '.join(lhs2)} = {rhs.render()}",
        "subject to alpha pi2 - beta sigma2 = 0",
    ])


def _coef(c: FieldElem, signed: bool = False) -> str:
    text = c.render()
    if text == "1":
        text = "+" if signed else ""
    elif text == "-1":
        text = "-"
    elif signed and not text.startswith("-"):
        text = "+" + text
    return text + (" " if text not in ("", "+", "-") else "")


# Solutions ------------------------------------------------------------------

@dataclass(frozen=True)
class FlowSolution:
    """A potential-type family on ``frame``.

    ``warp_kind="power"``: ``f_i = (1+kt)^{alphas[i]}`` and ``f = c (1+kt)^beta``.
    ``warp_kind="exponential"`` is the ``k -> 0`` limit: ``k = 0``,
    ``f_i = e^{alphas[i] t}`` (the alphas are rates) and ``f = c e^{rate t}``.
    """

    algebra: str
    frame: Coframe
    su3class: str
    alphas: tuple
    k: Fraction
    warp_kind: str = "power"
    beta: Fraction | None = None
    rate: Fraction | None = None
    c: FieldElem = field(default_factory=lambda: FieldElem(1))
    free: tuple = ()  # free directions in z-space when the solution is a family

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(as_fraction(a) for a in self.alphas))
        object.__setattr__(self, "k", as_fraction(self.k))
        object.__setattr__(self, "c", FieldElem.coerce(self.c))
        if len(self.alphas) != NVARS:
            raise ValueError("six frame exponents are required")
        if not self.c:
            raise ValueError("the warp constant c must be nonzero")
        if self.warp_kind == "power":
            if self.beta is None:
                raise ValueError("a power warp needs beta")
            object.__setattr__(self, "beta", as_fraction(self.beta))
        elif self.warp_kind == "exponential":
            if self.rate is None:
                raise ValueError("an exponential warp needs a rate")
            object.__setattr__(self, "rate", as_fraction(self.rate))
            if self.k != 0:
                raise ValueError("an exponential family needs k = 0")
        else:
            raise ValueError(f"unknown warp kind {self.warp_kind!r}")

    def scaling(self) -> FrameScaling:
        if self.warp_kind == "exponential":
            return FrameScaling(tuple(TimeScalar.exp(a, 1, 0) for a in self.alphas))
        return FrameScaling.potential(self.k, self.alphas)

    def warp(self) -> TimeScalar:
        if self.warp_kind == "power":
            return TimeScalar.power(self.k, self.beta, self.c)
        return TimeScalar.exp(self.rate, self.c, self.k)

    def structure(self) -> SU3Structure:
        return SU3Structure(self.frame, self.scaling())

    def warped(self, alpha=0, beta=1) -> WarpedG2Structure:
        return WarpedG2Structure(self.structure(), alpha, beta, self.warp())

    @property
    def validity(self) -> tuple:
        """Maximal interval containing 0 where ``1 + kt > 0``; ``None`` ends are infinite."""
        if self.k == 0:
            return (None, None)
        if self.k < 0:
            return (None, -1 / self.k)
        return (-1 / self.k, None)

    def validity_text(self) -> str:
        lo, hi = self.validity
        left = "-inf" if lo is None else render_rational(lo)
        right = "inf" if hi is None else render_rational(hi)
        return f"({left}, {right})"

    def z(self) -> list:
        """Coordinates ``(k a_1..k a_6, k b, k)``, or ``(rates, rate, 0)`` when exponential."""
        if self.warp_kind == "exponential":
            return list(self.alphas) + [self.rate, self.k]
        return [self.k * a for a in self.alphas] + [self.k * self.beta, self.k]

    def beta_or_rate(self) -> Fraction:
        return self.beta if self.warp_kind == "power" else self.rate

    def warp_text(self) -> str:
        """Warp with the constant kept symbolic, e.g. ``c*exp(-2t)``."""
        if self.warp_kind == "exponential":
            return f"c*exp({render_rational(self.rate)}t)"
        sign = "+" if self.k >= 0 else "-"
        mag = "" if abs(self.k) == 1 else render_rational(abs(self.k))
        return f"c*(1{sign}{mag}t)^({render_rational(self.beta)})"

    def perturbed(self, name: str, delta) -> FlowSolution:
        """Shift one parameter: ``alpha1..alpha6``, ``beta``, ``rate``, ``k`` or ``c``.

        Shifting ``k`` on an exponential solution keeps the rates fixed, giving
        ``f_i = (1+kt)^{v_i/k}`` and ``f = c (1+kt)^{u/k}``: the power family
        whose ``k -> 0`` limit is the exponential one.
        """
        delta = as_fraction(delta)
        if name.startswith("alpha") and name[5:].isdigit():
            i = int(name[5:]) - 1
            if not 0 <= i < NVARS:
                raise ValueError(f"no parameter {name!r}")
            alphas = list(self.alphas)
            alphas[i] += delta
            return replace(self, alphas=tuple(alphas))
        if name == "beta":
            if self.warp_kind != "power":
                raise ValueError("beta is not a parameter of an exponential warp")
            return replace(self, beta=self.beta + delta)
        if name == "rate":
            if self.warp_kind != "exponential":
                raise ValueError("rate is not a parameter of a power warp")
            return replace(self, rate=self.rate + delta)
        if name == "k":
            k = self.k + delta
            if self.warp_kind == "exponential":
                if k == 0:
                    return self
                return replace(self, k=k, warp_kind="power", alphas=tuple(a / k for a in self.alphas),
                               beta=self.rate / k, rate=None)
            return replace(self, k=k)
        if name == "c":
            return replace(self, c=self.c + delta)
        raise ValueError(f"no parameter {name!r}; use alpha1..alpha6, beta, rate, k or c")

    def parameter_names(self) -> list:
        """Parameters fixed by the flow (``c`` is free and excluded)."""
        names = [f"alpha{i}" for i in range(1, NVARS + 1)]
        names.append("beta" if self.warp_kind == "power" else "rate")
        names.append("k")
        return names


@dataclass
class CoflowResidual:
    frame: KForm     # d/dt *phi + Delta *phi on the 7-frame
    eq1: KForm       # reduced 4-form equation on the base
    eq2: KForm       # reduced 3-form equation on the base
    agree: bool      # frame == 1/2 eq1 + eq2 ^ x^7
    coclosed: bool   # d *phi(t) = 0 along the family

    @property
    def is_zero(self) -> bool:
        return self.frame.is_zero() and self.eq1.is_zero() and self.eq2.is_zero()

    def offending(self) -> list:
        return [(idx, c) for idx, c in sorted(self.frame.terms.items())]


def coflow_residual(sol: FlowSolution, alpha=0, beta=1) -> CoflowResidual:
    w = sol.warped(alpha, beta)
    _, sp = build_phi(w)
    frame_res = ddt_form(sp, w.scaling) + laplacian7(sp, w)

    s = w.base
    tor = torsion(s)
    scal6 = s.scaling
    al, be = w.alpha, w.beta
    A = _combo(al, tor.pi0, -be, tor.sigma0)
    B = tor.pi2.scale(al) - tor.sigma2.scale(be)
    # d6 of the constant-in-space scalar A vanishes
    rhs1 = (OMEGA2.scale(-3 * A * A if A else 0) + wedge(B, OMEGA).scale(3 * A if A else 0)
            + s.d(unit_star(tor.nu3)).scale(2))
    eq1 = ddt_form(OMEGA2, scal6) - rhs1
    psi_ba = w.psi_ba
    lhs2 = psi_ba.scale(w.warp.log_derivative()) + ddt_form(psi_ba, scal6)
    rhs2 = (-(PSI_PLUS.scale(-3 * tor.sigma0 if tor.sigma0 else 0)
              + PSI_MINUS.scale(3 * tor.pi0 if tor.pi0 else 0)
              + tor.nu3.scale(2)).scale(A)
            - s.d(B))
    eq2 = lhs2 - rhs2
    relation = embed(eq1.scale(Fraction(1, 2))) + _ds(eq2)
    coclosed = w.d(sp).is_zero()
    return CoflowResidual(frame_res, eq1, eq2, relation == frame_res, coclosed)


def nk_solution(sigma0, c=1, frame: Coframe | None = None) -> FlowSolution:
    """Self-similar coflow solution over a nearly Kahler base with torsion ``sigma0``.

    ``F = (1 - 3 sigma0^2 t / 2)^{1/2}`` scales every base direction and the warp.
    """
    sigma0 = as_fraction(sigma0)
    if sigma0 == 0:
        raise ValueError("sigma0 = 0 is the stationary Calabi-Yau case, not nearly Kahler")
    if frame is None:
        frame = get("su2+su2")
        base_sigma0 = torsion(SU3Structure(frame)).sigma0
        factor = sigma0 / base_sigma0.rational()
        frame = _rescale(frame, factor)
    k = Fraction(-3, 2) * sigma0 * sigma0
    half = Fraction(1, 2)
    return FlowSolution(frame.name, frame, NEARLY_KAHLER, (half,) * NVARS, k, "power", beta=half, c=c)


def _rescale(frame: Coframe, factor: Fraction) -> Coframe:
    """Multiply all structure constants by ``factor`` (a homothety of the metric)."""
    if factor == 1:
        return frame
    entries = tuple(tuple((key, c * factor) for key, c in e) for e in frame.entries)
    return Coframe(frame.name, frame.dim, entries, frame.params)


def check_class_preserved(sol: FlowSolution) -> bool:
    """The SU(3)-class of the family agrees with the declared class for all ``t``."""
    s = sol.structure()
    if sol.su3class == SHF:
        return s.d(OMEGA).is_zero() and s.d(PSI_PLUS).is_zero()
    if sol.su3class == BALANCED:
        return s.d(PSI_PLUS).is_zero() and s.d(PSI_MINUS).is_zero() and s.d(OMEGA2).is_zero()
    if sol.su3class == NEARLY_KAHLER:
        tor = torsion(s)
        label, _ = classify_su3(tor)
        if label != NEARLY_KAHLER:
            return False
        base = torsion(SU3Structure(sol.frame)).sigma0
        expected = TimeScalar.power(sol.k, -sol.alphas[0], base)
        return tor.sigma0 == expected
    return False


def compatibility_preserved(sol: FlowSolution) -> bool:
    """``psi+ ^ psi- = 2/3 omega^3`` in the moving frame (an identity in the x-frame)."""
    s = sol.structure()
    return all(r.is_zero() for r in s.check_invariants().values())


# Symbolic ansatz ------------------------------------------------------------

def ansatz_scaling(constraint: str | None = None) -> FrameScaling:
    """Scales ``(1+kt)^{a_i}`` with symbolic exponents, optionally tied pairwise.

    ``constraint="shf"`` sets ``a_2 = -a_1, a_4 = -a_3, a_6 = -a_5``;
    ``"balanced"`` sets ``a_2 = a_1`` and so on.
    """
    scales = []
    for i in range(NVARS):
        if constraint is None or i % 2 == 0:
            scales.append(AnsatzScalar.variable_power(NVARS, i))
        else:
            lead = AnsatzScalar.variable_power(NVARS, i - 1)
            scales.append(lead.inverse() if constraint == "shf" else lead)
    return FrameScaling(tuple(scales))


def _ansatz_warp_scaling(base: FrameScaling) -> FrameScaling:
    return base.extend(AnsatzScalar._raw(NVARS, {(Fraction(0),) * NVARS: FieldElem(1)}))


@dataclass(frozen=True)
class _Equation:
    """``c * l_I(z) / (1+kt) + sum_j r_j (1+kt)^{m_j . a} = 0`` (``lhs`` may be absent)."""

    label: str
    terms: tuple          # ((m, r), ...)
    lhs: tuple | None     # (c, indices in z)


def _as_ansatz(c) -> AnsatzScalar:
    if isinstance(c, AnsatzScalar):
        return c
    return AnsatzScalar._raw(NVARS, {(Fraction(0),) * NVARS: FieldElem.coerce(c)} if c else {})


def _frame_equations(frame: Coframe) -> list:
    scal7 = _ansatz_warp_scaling(ansatz_scaling())
    w_frame = frame.extended()

    class _W:  # minimal stand-in carrying d for laplacian7
        @staticmethod
        def d(a):
            return d(a, w_frame, scal7)

    sp = embed(OMEGA2.scale(Fraction(1, 2))) + _ds(PSI_PLUS)
    lap = laplacian7(sp, _W)
    eqs = []
    for idx in basis(7, 4):
        c = sp.terms.get(idx, 0)
        rhs = _as_ansatz(lap.terms.get(idx, 0))
        if not c and not rhs:
            continue
        z_idx = tuple(U if i == 7 else i - 1 for i in idx)
        terms = tuple(sorted(rhs.terms.items()))
        eqs.append(_Equation("x^" + "".join(map(str, idx)), terms, (FieldElem.coerce(c), z_idx) if c else None))
    return eqs


def _preservation_equations(frame: Coframe, su3class: str) -> list:
    s = SU3Structure(frame, ansatz_scaling())
    forms = {SHF: [("d omega", OMEGA), ("d psi+", PSI_PLUS)],
             BALANCED: [("d psi+", PSI_PLUS), ("d psi-", PSI_MINUS), ("d omega^2", OMEGA2)]}[su3class]
    eqs = []
    for name, form in forms:
        for idx, c in sorted(s.d(form).terms.items()):
            c = _as_ansatz(c)
            eqs.append(_Equation(f"{name} x^{''.join(map(str, idx))}", tuple(sorted(c.terms.items())), None))
    return eqs


def _class_rows(su3class: str) -> list:
    rows = []
    for i in (0, 2, 4):
        row = [FieldElem(0)] * NZ
        row[i] = FieldElem(1)
        row[i + 1] = FieldElem(1 if su3class == SHF else -1)
        rows.append((row, FieldElem(0)))
    return rows


class _System:
    """Affine constraints on ``z`` kept in reduced row echelon form."""

    __slots__ = ("rows",)

    def __init__(self, rows: tuple = ()):
        self.rows = rows

    def add(self, new: list):
        """New system with the extra ``(row, rhs)`` pairs, or ``None`` if inconsistent."""
        useful = [list(r) + [b] for r, b in new if any(r) or b]
        if not useful:
            return self
        m, pivots = linalg.rref([list(r) for r in self.rows] + useful)
        if NZ in pivots:
            return None
        m = [tuple(r) for r in m[:len(pivots)]]
        return _System(tuple(m))

    def key(self) -> tuple:
        return self.rows

    def solution(self):
        if not self.rows:
            return [FieldElem(0)] * NZ, [[FieldElem(int(i == j)) for i in range(NZ)] for j in range(NZ)]
        return linalg.solve_affine([r[:NZ] for r in self.rows], [r[NZ] for r in self.rows])


def _zero() -> FieldElem:
    return FieldElem(0)


def _exponent_row(m: tuple, shift_k: bool) -> list:
    row = [FieldElem(q) for q in m] + [_zero(), FieldElem(1 if shift_k else 0)]
    return row


def _block_options(eq: _Equation, terms: list, special_taken: bool):
    """Yield ``(block, is_special, rows, rest)`` for the block containing ``terms[0]``."""
    first, rest = terms[0], terms[1:]
    for size in range(len(rest) + 1):
        for others in combinations(range(len(rest)), size):
            block = [first] + [rest[i] for i in others]
            remaining = [t for i, t in enumerate(rest) if i not in others]
            total = sum((r for _, r in block), FieldElem(0))
            eq_rows = []
            m0 = block[0][0]
            for m, _ in block[1:]:
                diff = tuple(a - b for a, b in zip(m, m0))
                eq_rows.append((_exponent_row(diff, False), _zero()))
            if not total:
                yield block, False, eq_rows, remaining
            if eq.lhs is not None and not special_taken:
                c, idx = eq.lhs
                rows = [(_exponent_row(m, True), _zero()) for m, _ in block]
                lrow = [_zero()] * NZ
                for i in idx:
                    lrow[i] = lrow[i] + c
                rows.append((lrow, -total))
                yield block, True, rows, remaining


def _equation_branches(eq: _Equation, system: _System):
    """All systems obtained by extending ``system`` with one exponent partition of ``eq``."""
    out = {}

    def rec(terms, sys, special_taken):
        if not terms:
            if eq.lhs is not None and not special_taken:
                c, idx = eq.lhs
                lrow = [_zero()] * NZ
                for i in idx:
                    lrow[i] = lrow[i] + c
                sys = sys.add([(lrow, _zero())])
                if sys is None:
                    return
            out.setdefault(sys.key(), sys)
            return
        for _, special, rows, remaining in _block_options(eq, terms, special_taken):
            nxt = sys.add(rows)
            if nxt is not None:
                rec(remaining, nxt, special_taken or special)

    rec(list(eq.terms), system, False)
    return list(out.values())


def _contained(inner, outer) -> bool:
    """Affine family ``inner`` lies inside ``outer`` (both ``(particular, basis)``)."""
    return all(_in_family(p, outer) for p in _family_points(inner))


def _family_points(fam) -> list:
    part, null = fam
    return [part] + [[a + b for a, b in zip(part, v)] for v in null]


def _in_family(point, fam) -> bool:
    part, null = fam
    diff = [FieldElem.coerce(a) - FieldElem.coerce(b) for a, b in zip(point, part)]
    if not any(diff):
        return True
    if not null:
        return False
    cols = linalg.transpose([[FieldElem.coerce(x) for x in v] for v in null])
    return linalg.solve_affine(cols, diff) is not None


def solve_families(frame: Coframe, su3class: str) -> list:
    """Maximal affine families in ``z`` solving the ansatz equations exactly."""
    su3class = CLASS_ALIASES.get(su3class, su3class)
    if su3class not in (SHF, BALANCED):
        raise ValueError(f"the solver handles shf and balanced bases, not {su3class!r}")
    start = _System().add(_class_rows(su3class))
    eqs = _preservation_equations(frame, su3class) + _frame_equations(frame)
    eqs.sort(key=lambda e: (len(e.terms), e.label))
    frontier = {start.key(): start}
    for eq in eqs:
        nxt = {}
        for sys in frontier.values():
            for branch in _equation_branches(eq, sys):
                nxt.setdefault(branch.key(), branch)
        frontier = nxt
        if not frontier:
            return []
    fams = []
    for sys in frontier.values():
        sol = sys.solution()
        if sol is not None:
            fams.append(([FieldElem.coerce(x) for x in sol[0]], [[FieldElem.coerce(x) for x in v] for v in sol[1]]))
    maximal = []
    for i, fam in enumerate(fams):
        if any(j != i and _contained(fam, other) and not (_contained(other, fam) and j > i)
               for j, other in enumerate(fams)):
            continue
        maximal.append(fam)
    return maximal


@dataclass
class SolveReport:
    algebra: str
    su3class: str
    solutions: list            # FlowSolution, isolated points with k != 0 or exponential warp
    stationary: list           # families whose points have k = 0 and u = 0
    families: list             # positive-dimensional families (particular, basis) in z
    diagnostics: list


def _point_to_solution(point, frame: Coframe, su3class: str, c) -> FlowSolution | None:
    vals = [FieldElem.coerce(x) for x in point]
    if not all(x.is_rational() for x in vals):
        return None
    v = [x.rational() for x in vals[:NVARS]]
    u, k = vals[U].rational(), vals[K].rational()
    if k != 0:
        return FlowSolution(frame.name, frame, su3class, tuple(x / k for x in v), k, "power", beta=u / k, c=c)
    if not any(v) and u == 0:
        return None
    return FlowSolution(frame.name, frame, su3class, tuple(v), 0, "exponential", rate=u, c=c)


def solve_potential_ansatz(frame: Coframe, su3class: str, c=1) -> SolveReport:
    su3class = CLASS_ALIASES.get(su3class, su3class)
    label, _ = classify_su3(torsion(SU3Structure(frame)))
    if label != su3class:
        raise PreconditionError(f"{frame.name} is {label} at t=0, not {su3class}")
    fams = solve_families(frame, su3class)
    solutions, stationary, families, diag = [], [], [], []
    for part, null in fams:
        if null:
            families.append((part, null))
            diag.append(f"{len(null)}-parameter family through {_render_z(part)}")
            # a family is still a source of solutions: report its particular point when admissible
            if part[K]:
                sol = _point_to_solution(part, frame, su3class, c)
                if sol is not None:
                    solutions.append(replace(sol, free=tuple(tuple(v) for v in null)))
            continue
        if not part[K] and not part[U] and not any(part[:NVARS]):
            stationary.append(part)
            continue
        sol = _point_to_solution(part, frame, su3class, c)
        if sol is None:
            diag.append(f"inadmissible point {_render_z(part)}")
            continue
        solutions.append(sol)
    for sol in solutions:
        if not coflow_residual(sol).is_zero:
            diag.append(f"residual check failed for {sol.alphas}, {sol.beta_or_rate()}, {sol.k}")
    solutions.sort(key=lambda s: (s.k, s.beta_or_rate(), s.alphas))
    if not solutions and not families:
        diag.append("no nonstationary solution of the ansatz")
    return SolveReport(frame.name, su3class, solutions, stationary, families, diag)


def _render_z(z) -> str:
    return "(" + ", ".join(f"{n}={FieldElem.coerce(x).render()}" for n, x in zip(Z_NAMES, z)) + ")"


# Torsion column -------------------------------------------------------------

_PSI_SIGNS = {(1, 3, 5): 1, (1, 4, 6): -1, (2, 3, 6): -1, (2, 4, 5): -1}
_OMEGA2_SIGNS = {(1, 2, 3, 4): 1, (1, 2, 5, 6): 1, (3, 4, 5, 6): 1}


def torsion_column(frame: Coframe, su3class: str) -> dict:
    """Symbolic ``d sigma2(t)`` (shf) or ``d *nu3(t)`` (balanced) as named coefficients.

    Names are ``A_{ijk}`` with ``d sigma2 = A135 x135 - A146 x146 - A236 x236 - A245 x245``
    and ``B_{ijkl}`` with ``d *nu3 = B1234 x1234 + B1256 x1256 + B3456 x3456``.
    """
    su3class = CLASS_ALIASES.get(su3class, su3class)
    tag = "shf" if su3class == SHF else "balanced"
    s = SU3Structure(frame, ansatz_scaling(tag))
    tor = torsion(s)
    if su3class == SHF:
        form, signs, letter = s.d(tor.sigma2), _PSI_SIGNS, "A"
    else:
        form, signs, letter = s.d(unit_star(tor.nu3)), _OMEGA2_SIGNS, "B"
    out = {}
    for idx, c in sorted(form.terms.items()):
        c = _as_ansatz(c)
        sign = signs.get(idx)
        name = letter + "".join(map(str, idx)) if sign else "x" + "".join(map(str, idx))
        out[name] = c if sign in (None, 1) else -c
    return out


ALPHA_NAMES = tuple(f"a{i}" for i in range(1, NVARS + 1))


def render_torsion_column(col: dict) -> str:
    if not col:
        return "0"
    return ", ".join(f"{name}={val.render(ALPHA_NAMES)}" for name, val in col.items())


# Reference rows -------------------------------------------------------------

def _f(*xs):
    return tuple(Fraction(x) for x in xs)


_S = Fraction(1, 6)
_H = Fraction(1, 2)


@dataclass(frozen=True)
class ExpectedRow:
    algebra: str
    su3class: str
    alphas: tuple
    beta: Fraction
    k: Fraction
    a: Fraction = Fraction(1)
    column: tuple = ()     # ((name, {exponent vector: coeff}), ...)

    def matches(self, sol: FlowSolution) -> bool:
        return (sol.warp_kind == "power" and sol.alphas == self.alphas
                and sol.beta == self.beta and sol.k == self.k)

    def in_family(self, part, null) -> bool:
        z = [self.k * x for x in self.alphas] + [self.k * self.beta, self.k]
        return _in_family([FieldElem(x) for x in z], (part, null))


def _col(*items):
    return tuple((name, tuple((tuple(Fraction(q) for q in m), c) for m, c in terms)) for name, terms in items)


def _m(a1=0, a3=0, a5=0):
    return (a1, 0, a3, 0, a5, 0)


def table_shf(a=1) -> list:
    a = Fraction(a)
    g51 = (_S, -_S, _S, -_S, _S, -_S)
    return [
        ExpectedRow("g5,1+R", SHF, g51, _S, Fraction(-3),
                    column=_col(("A135", [(_m(-2, -2, -2), -2)]))),
        ExpectedRow("A5,7", SHF, _f(0, 0, 0, 0, -_H, _H), _H, Fraction(-4),
                    column=_col(("A146", [(_m(0, 0, 2), -4)]), ("A236", [(_m(0, 0, 2), -4)]))),
        ExpectedRow("A5,17", SHF, _f(0, 0, 0, 0, _H, -_H), _H, -4 * a * a, a=a,
                    column=_col(("A135", [(_m(0, 0, -2), -4 * a * a)]), ("A245", [(_m(0, 0, -2), -4 * a * a)]))),
        ExpectedRow("g6,N3", SHF, g51, _S, Fraction(-9),
                    column=_col(("A135", [(_m(-2, -2, -2), -6)]))),
        ExpectedRow("g6,38", SHF, (-_S, _S, _S, -_S, -_S, _S), _S, Fraction(-9),
                    column=_col(("A236", [(_m(2, -4, 0), -6)]))),
        ExpectedRow("g6,54", SHF, (-_H, _H, -_H, _H, -_H, _H), Fraction(3, 2), Fraction(-1),
                    column=_col(("A146", [(_m(0, 0, 2), -2)]), ("A236", [(_m(0, 0, 2), -2)]),
                                ("A245", [(_m(2, 2, -2), -2)]))),
        ExpectedRow("g6,118", SHF, _f(0, 0, 0, 0, _H, -_H), _H, Fraction(-4),
                    column=_col(("A135", [(_m(0, 0, -2), -4)]), ("A245", [(_m(0, 0, -2), -4)]),
                                ("A146", [(_m(0, 0, 2), 2), (_m(2, -2, 2), -2)]),
                                ("A236", [(_m(0, 0, 2), 2), (_m(2, -2, 2), -2)]))),
    ]


def table_balanced() -> list:
    h = (_S, _S, _S, _S, -_S, -_S)
    b = -_S
    return [
        ExpectedRow("h2", BALANCED, h, b, Fraction(-192), column=_col(("B1234", [(_m(-4, 0, 2), -128)]))),
        ExpectedRow("h3", BALANCED, h, b, Fraction(-12), column=_col(("B1234", [(_m(-4, 0, 2), -8)]))),
        ExpectedRow("h4", BALANCED, h, b, Fraction(-9), column=_col(("B1234", [(_m(-2, -2, 2), -6)]))),
        ExpectedRow("h5", BALANCED, h, b, Fraction(-6), column=_col(("B1234", [(_m(-2, -2, 2), -4)]))),
        ExpectedRow("h6", BALANCED, h, b, Fraction(-3), column=_col(("B1234", [(_m(-2, -2, 2), -2)]))),
        ExpectedRow("h19-", BALANCED, (_H, _H, 0, 0, 0, 0), -_H, Fraction(-2),
                    column=_col(("B1234", [(_m(-2, -2, 2), -2)]), ("B1256", [(_m(-2, 2, -2), -2)]))),
    ]


def expected_column_at(row: ExpectedRow) -> dict:
    out = {}
    for name, terms in row.column:
        ts = TimeScalar(row.k, {})
        for m, c in terms:
            p = sum((q * x for q, x in zip(m, row.alphas)), Fraction(0))
            ts = ts + TimeScalar.power(row.k, p, c)
        out[name] = ts
    return out


def column_at(col: dict, sol: FlowSolution) -> dict:
    return {name: val.substitute(sol.alphas, sol.k) for name, val in col.items()}


@dataclass
class TableRowResult:
    expected: ExpectedRow
    solutions: list
    matched: FlowSolution | None
    residual_zero: bool
    column: str
    column_match: bool
    diagnostics: list

    @property
    def ok(self) -> bool:
        return self.matched is not None and self.residual_zero and self.column_match


def check_row(row: ExpectedRow, c=1) -> TableRowResult:
    frame = get(row.algebra, row.a)
    rep = solve_potential_ansatz(frame, row.su3class, c=c)
    matched = next((s for s in rep.solutions if row.matches(s)), None)
    if matched is None:
        for part, null in rep.families:
            if row.in_family(part, null):
                matched = FlowSolution(frame.name, frame, row.su3class, row.alphas, row.k, "power",
                                       beta=row.beta, c=c, free=tuple(tuple(v) for v in null))
                break
    residual_zero = matched is not None and coflow_residual(matched).is_zero
    col = torsion_column(frame, row.su3class)
    column_match = False
    if matched is not None:
        got = column_at(col, matched)
        want = expected_column_at(row)
        column_match = {n: v for n, v in got.items() if v} == {n: v for n, v in want.items() if v}
    return TableRowResult(row, rep.solutions, matched, residual_zero, render_torsion_column(col),
                          column_match, rep.diagnostics)


def reproduce_tables(which: str = "both", a_values=(1, 2)) -> list:
    rows = []
    if which in ("shf", "both"):
        for r in table_shf(1):
            if r.algebra == "A5,17":
                rows.extend(table_shf(a)[2] for a in a_values)
            else:
                rows.append(r)
    if which in ("balanced", "both"):
        rows.extend(table_balanced())
    return [check_row(r) for r in rows]


# Exponential example ---------------------------------------------------------

def e11_solution(c=1, rate=-2) -> FlowSolution:
    frame = get("e11+e11")
    return FlowSolution(frame.name, frame, SHF, (0,) * NVARS, 0, "exponential", rate=rate, c=c)


def d_torsion_at(sol: FlowSolution) -> KForm:
    """``d sigma2(t)`` for shf, ``d *nu3(t)`` for balanced and ``sigma0(t)`` as a 0-form otherwise."""
    s = sol.structure()
    tor = torsion(s)
    if sol.su3class == SHF:
        return s.d(tor.sigma2)
    if sol.su3class == BALANCED:
        return s.d(unit_star(tor.nu3))
    return KForm.scalar(6, tor.sigma0)


def d_sigma2(sol: FlowSolution) -> KForm:
    s = sol.structure()
    return s.d(torsion(s).sigma2)


def solution_record(sol: FlowSolution, alpha=0, beta=1) -> dict:
    res = coflow_residual(sol, alpha, beta)
    col = ""
    if sol.su3class in (SHF, BALANCED) and sol.warp_kind == "power":
        col = render_torsion_column(torsion_column(sol.frame, sol.su3class))
    return {
        "algebra": sol.algebra,
        "class": sol.su3class,
        "alphas": [render_rational(a) for a in sol.alphas],
        "beta_or_rate": render_rational(sol.beta_or_rate()),
        "warp": sol.warp_text(),
        "k": render_rational(sol.k),
        "c": sol.c.render(),
        "validity": sol.validity_text(),
        "residual_zero": res.is_zero,
        "torsion_column": col,
        "torsion_column_at_solution": d_torsion_at(sol).render(),
    }
