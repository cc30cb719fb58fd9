"""Invariant coframes on Lie groups: structure equations and the exterior derivative.

A ``Coframe`` stores ``dh^i = sum c^i_{jk} h^{jk}`` with constants in
Q(r2, r3). On the time-scaled frame ``x^i = f_i h^i`` the structure equations
become ``dx^i = sum c^i_{jk} f_i / (f_j f_k) x^{jk}``; coefficients of forms
depend on ``t`` only, so ``d`` acts on generators alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exterior import FrameScaling, KForm, perm_sign
from .notation import parse_entries, render_entries
from .scalars import FieldElem, as_fraction


@dataclass(frozen=True)
class Coframe:
    name: str
    dim: int
    entries: tuple  # per generator: tuple of ((j, k), FieldElem), j < k
    params: tuple = field(default=())

    @classmethod
    def from_maps(cls, name: str, maps: list, params: tuple = ()) -> Coframe:
        entries = tuple(tuple(sorted((key, FieldElem.coerce(c)) for key, c in m.items() if c)) for m in maps)
        return cls(name, len(maps), entries, params)

    def entry_map(self, i: int) -> dict:
        """1-based generator index."""
        return dict(self.entries[i - 1])

    def d_table(self) -> list:
        """``[dh^1, ..., dh^n]`` as static 2-forms."""
        return [KForm(self.dim, 2, dict(e)) for e in self.entries]

    def extended(self) -> Coframe:
        """Append a closed generator (``x^7 = f ds`` with ``f`` constant on the base)."""
        return Coframe(self.name, self.dim + 1, self.entries + ((),), self.params)

    def render(self) -> str:
        return render_entries([dict(e) for e in self.entries])

    def is_nilpotent(self) -> bool:
        """Sufficient test: generators can be ordered so each dh^i uses earlier ones only."""
        remaining = set(range(1, self.dim + 1))
        closed: set = set()
        changed = True
        while changed:
            changed = False
            for i in sorted(remaining):
                if all(j in closed and k in closed for (j, k), _ in self.entries[i - 1]):
                    closed.add(i)
                    remaining.discard(i)
                    changed = True
        return not remaining


def parse_structure_equations(text: str, dim: int = 6, name: str = "custom") -> Coframe:
    return Coframe.from_maps(name, parse_entries(text, dim))


@lru_cache(maxsize=512)
def _generator_differentials(frame: Coframe, scaling: FrameScaling | None) -> tuple:
    """``dx^i`` in the x-frame for each generator."""
    out = []
    for i, entry in enumerate(frame.entries, start=1):
        terms = {}
        for (j, k), c in entry:
            if scaling is None:
                terms[(j, k)] = c
            else:
                terms[(j, k)] = (scaling[i] * scaling[j].inverse() * scaling[k].inverse()) * c
        out.append(KForm._raw(frame.dim, 2, {key: v for key, v in terms.items() if v}))
    return tuple(out)


def structure_equations(frame: Coframe, scaling: FrameScaling | None = None) -> list:
    """Time-dependent structure equations ``[dx^1, ..., dx^n]``."""
    if scaling is not None and scaling.dim != frame.dim:
        raise ValueError(f"scaling has {scaling.dim} factors for a {frame.dim}-dimensional frame")
    return list(_generator_differentials(frame, scaling))


def d(a: KForm, frame: Coframe, scaling: FrameScaling | None = None) -> KForm:
    """Exterior derivative of an x-frame form (coefficients constant in space)."""
    if a.dim != frame.dim:
        raise ValueError(f"form of dimension {a.dim} on a {frame.dim}-dimensional frame")
    if a.degree >= a.dim:
        return KForm.zero(a.dim, a.dim)
    dx = structure_equations(frame, scaling)
    out: dict = {}
    for idx, c in a.terms.items():
        for r, i in enumerate(idx):
            di = dx[i - 1]
            if not di.terms:
                continue
            head, tail = idx[:r], idx[r + 1:]
            rest = head + tail
            for (j, k), s in di.terms.items():
                if j in rest or k in rest:
                    continue
                seq = head + (j, k) + tail
                sgn = perm_sign(seq)
                if r & 1:
                    sgn = -sgn
                key = tuple(sorted(seq))
                val = s * c
                if sgn < 0:
                    val = -val
                prev = out.get(key)
                out[key] = val if prev is None else prev + val
    return KForm._raw(a.dim, a.degree + 1, {k: v for k, v in out.items() if v})


@dataclass
class JacobiReport:
    name: str
    residuals: list  # d(dh^i) per generator

    @property
    def ok(self) -> bool:
        return all(r.is_zero() for r in self.residuals)

    def failures(self) -> list:
        return [(i, r) for i, r in enumerate(self.residuals, start=1) if not r.is_zero()]


def validate(frame: Coframe) -> JacobiReport:
    """d^2 = 0 on every generator (the Jacobi identity)."""
    residuals = [d(dh, frame) for dh in frame.d_table()]
    return JacobiReport(frame.name, residuals)


# Catalog ------------------------------------------------------------------

_SU2_SU2 = "(r3h35-3h36-h45-r3h46,2r3h45,-r3h15+3h16+h25+r3h26,-2r3h25,2r3h24,-3h13-r3h14-r3h23+h24)"

_SHF = {
    "e11+e11": "(0,0,-h14,-h13,h25,-h26)",
    "g5,1+R": "(0,0,0,h15,0,h13)",
    "A5,7": "(h16,-h26,-h36,h46,0,0)",
    "g6,N3": "(0,-2h35,0,-h15,0,h13)",
    "g6,38": "(2h36,0,-h26,h25-h26,-h23-h24,h23)",
    "g6,54": "(1/2r2h16+h45,-1/2r2h26,h25-1/2r2h36,1/2r2h46,0,0)",
    "g6,118": "(-h15+h36,h25+h46,-h16-h35,-h26+h45,0,0)",
}

_BALANCED = {
    "h2": "(0,0,0,0,2h12+(2r2-2)h13+(-2-2r2)h24-2h34,4r2h12+4r2h23-4r2h34)",
    "h3": "(0,0,0,0,0,-2h12+2h34)",
    "h4": "(0,0,0,0,2h13,h14+h23)",
    "h5": "(0,0,0,0,h13-h24,h14+h23)",
    "h6": "(0,0,0,0,h13,h14)",
    "h19-": "(0,0,-h15,-h25,0,-h13-h24)",
}

SU3_CLASS_OF = {"su2+su2": "NearlyKahler", "A5,17": "SymplecticHalfFlat"}
SU3_CLASS_OF.update({name: "SymplecticHalfFlat" for name in _SHF})
SU3_CLASS_OF.update({name: "Balanced" for name in _BALANCED})

ALIASES = {
    "e(1,1)+e(1,1)": "e11+e11",
    "e11e11": "e11+e11",
    "g5,1": "g5,1+R",
    "A5,7^{-1,-1,1}+R": "A5,7",
    "A5,17^{-a,-a,1}+R": "A5,17",
    "g6,38^0": "g6,38",
    "g6,54^{0,-1}": "g6,54",
    "g6,118^{0,-1,-1}": "g6,118",
    "s3xs3": "su2+su2",
}


def a517(a=1) -> Coframe:
    """A5,17^{-a,-a,1} + R for a nonzero rational ``a``."""
    a = as_fraction(a)
    if a == 0:
        raise ValueError("A5,17 requires a != 0")
    maps = [
        {(1, 5): a, (3, 5): 1},
        {(2, 5): -a, (4, 5): 1},
        {(1, 5): -1, (3, 5): a},
        {(2, 5): -1, (4, 5): -a},
        {},
        {},
    ]
    return Coframe.from_maps("A5,17", maps, params=(("a", a),))


class UnknownAlgebra(KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown algebra {name!r}; available: {', '.join(catalog_names())}")

    def __str__(self) -> str:
        return self.args[0]


def catalog_names() -> list:
    return ["su2+su2", *_SHF.keys(), "A5,17", *_BALANCED.keys()]


def get(name: str, a=1) -> Coframe:
    name = ALIASES.get(name, name)
    if name == "su2+su2":
        return parse_structure_equations(_SU2_SU2, 6, "su2+su2")
    if name == "A5,17":
        return a517(a)
    if name in _SHF:
        return parse_structure_equations(_SHF[name], 6, name)
    if name in _BALANCED:
        return parse_structure_equations(_BALANCED[name], 6, name)
    raise UnknownAlgebra(name)


def catalog(a=1) -> list:
    """All catalog algebras, in a fixed order."""
    return [get(name, a) for name in catalog_names()]


def su2_su2_from_lambda_nu() -> list:
    """Adapted-basis structure equations of su(2)+su(2), recomputed from scratch.

    Starts from ``d lambda^1 = lambda^23`` (cyclic, same for ``nu``) and the basis
    change ``h^1 = lambda^1/3 - nu^1/6, h^2 = r3/6 nu^1, ..., h^6 = -lambda^3/3 + nu^3/6``.
    Returns the six 2-forms ``dh^i`` in the h-basis.
    """
    from .scalars import R3

    def one(m):
        return KForm(6, 1, {(i,): c for i, c in m.items()})

    # invert the basis change: nu^1 = 2 r3 h^2, lambda^1 = 3 h^1 + r3 h^2, etc.
    nu = [one({2: 2 * R3}), one({4: 2 * R3}), one({5: 2 * R3})]
    lam = [one({1: FieldElem(3), 2: R3}), one({3: FieldElem(3), 4: R3}), one({6: FieldElem(-3), 5: R3})]

    def su2(e):
        return [e[1] ^ e[2], -(e[0] ^ e[2]), e[0] ^ e[1]]

    dl, dn = su2(lam), su2(nu)
    third, sixth = Fraction(1, 3), Fraction(1, 6)
    return [
        dl[0] * third - dn[0] * sixth,
        dn[0] * (R3 * sixth),
        dl[1] * third - dn[1] * sixth,
        dn[1] * (R3 * sixth),
        dn[2] * (R3 * sixth),
        dl[2] * (-third) + dn[2] * sixth,
    ]
