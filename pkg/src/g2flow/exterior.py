"""Alternating forms on a fixed coframe of dimension at most 7.

A ``KForm`` is a sparse map from strictly increasing index tuples (1-based) to
coefficients. Coefficients may be ``int``/``Fraction``/``FieldElem`` (static
forms), ``TimeScalar`` or ``AnsatzScalar``; the code only relies on ring
operations and truthiness.

Forms are normally written in the time-scaled frame ``x^i = f_i h^i``, which
is orthonormal, so the Hodge star there is the unit-metric star.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .scalars import FieldElem, TimeScalar


class DimensionError(ValueError):
    pass


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 if an index repeats."""
    inv = 0
    n = len(seq)
    for i in range(n):
        si = seq[i]
        for j in range(i + 1, n):
            sj = seq[j]
            if si == sj:
                return 0
            if si > sj:
                inv += 1
    return -1 if inv & 1 else 1


def _parse_index(idx) -> tuple:
    if isinstance(idx, str):
        return tuple(int(ch) for ch in idx)
    if isinstance(idx, int):
        return (idx,)
    return tuple(idx)


class KForm:
    """Degree-homogeneous alternating form."""

    __slots__ = ("dim", "degree", "terms")

    def __init__(self, dim: int, degree: int, terms: Mapping | None = None):
        if not 0 <= degree <= dim:
            raise DimensionError(f"degree {degree} out of range for dimension {dim}")
        self.dim = dim
        self.degree = degree
        out: dict = {}
        for idx, c in (terms or {}).items():
            idx = _parse_index(idx)
            if len(idx) != degree:
                raise DimensionError(f"index {idx} does not have length {degree}")
            if any(not 1 <= i <= dim for i in idx):
                raise DimensionError(f"index {idx} out of range 1..{dim}")
            s = perm_sign(idx)
            if s == 0 or not c:
                continue
            key = tuple(sorted(idx))
            val = c if s > 0 else -c
            prev = out.get(key)
            out[key] = val if prev is None else prev + val
        self.terms = {k: v for k, v in out.items() if v}

    @classmethod
    def _raw(cls, dim: int, degree: int, terms: dict) -> KForm:
        obj = object.__new__(cls)
        obj.dim = dim
        obj.degree = degree
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, dim: int, degree: int) -> KForm:
        return cls._raw(dim, degree, {})

    @classmethod
    def mono(cls, dim: int, idx, coeff=1) -> KForm:
        idx = _parse_index(idx)
        return cls(dim, len(idx), {idx: coeff})

    @classmethod
    def scalar(cls, dim: int, coeff) -> KForm:
        return cls._raw(dim, 0, {(): coeff} if coeff else {})

    @classmethod
    def from_terms(cls, dim: int, terms: Mapping) -> KForm:
        """Build from ``{"135": 1, "146": -1}``-style maps; degree read off the keys."""
        keys = [_parse_index(k) for k in terms]
        if not keys:
            raise ValueError("cannot infer the degree of an empty term map")
        return cls(dim, len(keys[0]), dict(zip(keys, terms.values())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _compatible(self, other: KForm) -> None:
        if self.dim != other.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if self.degree != other.degree and self.terms and other.terms:
            raise DimensionError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, KForm):
            return NotImplemented
        if self.dim != other.dim:
            return False
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.dim, self.degree, frozenset(self.terms.items())))

    def __neg__(self) -> KForm:
        return KForm._raw(self.dim, self.degree, {k: -v for k, v in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        self._compatible(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            prev = out.get(k)
            s = v if prev is None else prev + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return KForm._raw(self.dim, self.degree, out)

    def __sub__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> KForm:
        """Multiply every coefficient by the scalar ``c`` (on the left)."""
        if not c:
            return KForm._raw(self.dim, self.degree, {})
        out = {}
        for k, v in self.terms.items():
            p = c * v
            if p:
                out[k] = p
        return KForm._raw(self.dim, self.degree, out)

    def __mul__(self, c):
        if isinstance(c, KForm):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __xor__(self, other):
        """``a ^ b`` is the wedge product."""
        if not isinstance(other, KForm):
            return NotImplemented
        return wedge(self, other)

    def coeff(self, idx):
        return self.terms.get(tuple(sorted(_parse_index(idx))), 0) * perm_sign(_parse_index(idx))

    def map_coeffs(self, fn) -> KForm:
        out = {}
        for k, v in self.terms.items():
            w = fn(v)
            if w:
                out[k] = w
        return KForm._raw(self.dim, self.degree, out)

    def render(self, symbol: str = "x") -> str:
        """Deterministic ``+c x^{135}`` listing in lexicographic index order."""
        if not self.terms:
            return "0"
        pieces = []
        for idx in sorted(self.terms):
            c = self.terms[idx]
            text = c.render() if hasattr(c, "render") else str(c)
            label = f"{symbol}^{{{''.join(map(str, idx))}}}" if idx else ""
            if text == "1" and label:
                body = label
                sign = "+"
            elif text == "-1" and label:
                body = label
                sign = "-"
            else:
                simple = not any(ch in text[1:] for ch in "+-*") and "(" not in text
                if text.startswith("-") and simple:
                    sign, text = "-", text[1:]
                else:
                    sign = "+"
                    if not simple:
                        text = f"({text})"
                body = f"{text} {label}".strip()
            pieces.append(f"{sign}{body}")
        out = " ".join(pieces)
        return out[1:] if out.startswith("+") else out

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"KForm(dim={self.dim}, deg={self.degree}: {self.render()})"


def basis(dim: int, degree: int) -> list:
    """Increasing index tuples of the given length, lexicographically ordered."""
    return list(combinations(range(1, dim + 1), degree))


def wedge(a: KForm, b: KForm) -> KForm:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    deg = a.degree + b.degree
    if deg > a.dim:
        return KForm._raw(a.dim, min(deg, a.dim), {})
    out: dict = {}
    for i1, c1 in a.terms.items():
        s1 = set(i1)
        for i2, c2 in b.terms.items():
            if s1.intersection(i2):
                continue
            seq = i1 + i2
            sgn = perm_sign(seq)
            key = tuple(sorted(seq))
            val = c1 * c2
            if sgn < 0:
                val = -val
            prev = out.get(key)
            out[key] = val if prev is None else prev + val
    return KForm._raw(a.dim, deg, {k: v for k, v in out.items() if v})


def wedge_all(*forms: KForm) -> KForm:
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def contract(vector_index: int, a: KForm) -> KForm:
    """Interior product with the frame vector dual to ``x^vector_index``."""
    if not 1 <= vector_index <= a.dim:
        raise DimensionError(f"vector index {vector_index} out of range 1..{a.dim}")
    if a.degree == 0:
        raise DimensionError("cannot contract a 0-form")
    out: dict = {}
    for idx, c in a.terms.items():
        if vector_index not in idx:
            continue
        pos = idx.index(vector_index)
        key = idx[:pos] + idx[pos + 1:]
        out[key] = -c if pos & 1 else c
    return KForm._raw(a.dim, a.degree - 1, out)


def _complement(idx: tuple, dim: int) -> tuple:
    s = set(idx)
    return tuple(i for i in range(1, dim + 1) if i not in s)


def unit_star(a: KForm) -> KForm:
    """Hodge star for the unit metric with volume form ``x^{1..n}``."""
    n = a.dim
    out = {}
    for idx, c in a.terms.items():
        comp = _complement(idx, n)
        out[comp] = c if perm_sign(idx + comp) > 0 else -c
    return KForm._raw(n, n - a.degree, out)


@dataclass(frozen=True)
class FrameScaling:
    """Scale factors ``f_i`` with ``x^i = f_i h^i``; each ``f_i`` a single monomial."""

    scales: tuple

    def __post_init__(self):
        for f in self.scales:
            if not f.is_monomial():
                raise ValueError(f"frame scale {f!r} is not a single monomial")

    @classmethod
    def unit(cls, dim: int, k=0) -> FrameScaling:
        return cls(tuple(TimeScalar.const(1, k) for _ in range(dim)))

    @classmethod
    def potential(cls, k, exponents: Sequence) -> FrameScaling:
        """``f_i = (1+k t)^{exponents[i]}``."""
        return cls(tuple(TimeScalar.power(k, e) for e in exponents))

    @property
    def dim(self) -> int:
        return len(self.scales)

    def __len__(self) -> int:
        return len(self.scales)

    def __getitem__(self, i: int):
        """1-based access, matching frame indices."""
        return self.scales[i - 1]

    def extend(self, warp) -> FrameScaling:
        """Append the warp factor ``f`` as the scale of ``x^7 = f ds``."""
        return FrameScaling(tuple(self.scales) + (warp,))

    def normalized(self) -> bool:
        """``f_i(0) = 1`` for every scale."""
        return all(_value_at_zero(f) == 1 for f in self.scales)

    def factor(self, idx: Iterable[int]):
        out = None
        for i in idx:
            out = self.scales[i - 1] if out is None else out * self.scales[i - 1]
        return out

    def log_derivatives(self) -> list:
        return [f.log_derivative() for f in self.scales]


def _value_at_zero(f: TimeScalar) -> FieldElem:
    total = FieldElem(0)
    for _, c in f.terms.items():
        total = total + c
    return total


def to_static(a: KForm, scaling: FrameScaling) -> KForm:
    """Rewrite an x-frame form in the static h-frame (``x^I = f_I h^I``)."""
    _check_scaling(a, scaling)
    out = {}
    for idx, c in a.terms.items():
        if idx:
            c = scaling.factor(idx) * c
        if c:
            out[idx] = c
    return KForm._raw(a.dim, a.degree, out)


def from_static(a: KForm, scaling: FrameScaling) -> KForm:
    """Rewrite an h-frame form in the x-frame."""
    _check_scaling(a, scaling)
    out = {}
    for idx, c in a.terms.items():
        if idx:
            c = scaling.factor(idx).inverse() * c
        if c:
            out[idx] = c
    return KForm._raw(a.dim, a.degree, out)


def _check_scaling(a: KForm, scaling: FrameScaling) -> None:
    if scaling.dim != a.dim:
        raise DimensionError(f"scaling has {scaling.dim} factors, form has dimension {a.dim}")


def hodge(a: KForm, scaling: FrameScaling | None = None, orientation: int = 1) -> KForm:
    """Hodge star for the metric making ``{f_i h^i}`` orthonormal.

    Without ``scaling`` the input is taken to be in the orthonormal x-frame.
    With ``scaling`` the input and output are in the static h-frame: the form
    is moved to the x-frame, starred there and moved back.
    """
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    if scaling is None:
        out = unit_star(a)
    else:
        out = to_static(unit_star(from_static(a, scaling)), scaling)
    return out if orientation == 1 else -out


def ddt_form(a: KForm, scaling: FrameScaling) -> KForm:
    """Time derivative of an x-frame form, including the frame velocity.

    ``d/dt (c x^I) = (c' + c * sum_{i in I} f_i'/f_i) x^I``.
    """
    _check_scaling(a, scaling)
    rates = scaling.log_derivatives()
    out = {}
    for idx, c in a.terms.items():
        val = c.ddt() if hasattr(c, "ddt") else 0
        vel = None
        for i in idx:
            vel = rates[i - 1] if vel is None else vel + rates[i - 1]
        if vel is not None and vel:
            val = val + vel * c if val else vel * c
        if val:
            out[idx] = val
    return KForm._raw(a.dim, a.degree, out)


def inner_product_coeff(a: KForm, b: KForm):
    """Sum of coefficient products in the orthonormal frame (``<a, b>``)."""
    total = 0
    for idx, c in a.terms.items():
        d = b.terms.get(idx)
        if d is not None:
            total = c * d + total
    return total


def vector(form: KForm) -> list:
    """Coefficient list over ``basis(dim, degree)``."""
    return [form.terms.get(idx, 0) for idx in basis(form.dim, form.degree)]


def from_vector(dim: int, degree: int, coeffs: Sequence) -> KForm:
    return KForm._raw(dim, degree, {idx: c for idx, c in zip(basis(dim, degree), coeffs) if c})


def rational_vector(form: KForm) -> list:
    out = []
    for c in vector(form):
        if isinstance(c, FieldElem):
            out.append(c.rational())
        else:
            out.append(Fraction(c))
    return out
