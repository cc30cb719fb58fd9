"""Exact scalars: the field Q(sqrt2, sqrt3) and time-dependent coefficient rings.

``FieldElem`` holds ``a + b*r2 + c*r3 + d*r6`` with rational parts.
``TimeScalar`` is a finite sum of ``coeff * (1+k*t)**p * exp(r*t)`` for a fixed
ring parameter ``k``; it is closed under ``+``, ``*`` and ``d/dt``.
``AnsatzScalar`` is a sum of ``coeff * (1+k*t)**<linear form in alpha>``, used
when the frame exponents are still unknowns.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction

_RADICALS = ("", "r2", "r3", "r6")


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def render_rational(q: Fraction) -> str:
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class FieldElem:
    """Element of Q(sqrt2, sqrt3) in the basis 1, r2, r3, r6."""

    __slots__ = ("_c",)

    def __init__(self, a=0, b=0, c=0, d=0):
        self._c = (as_fraction(a), as_fraction(b), as_fraction(c), as_fraction(d))

    @classmethod
    def _raw(cls, parts: tuple) -> FieldElem:
        obj = object.__new__(cls)
        obj._c = parts
        return obj

    @classmethod
    def coerce(cls, x) -> FieldElem:
        if isinstance(x, FieldElem):
            return x
        return cls(as_fraction(x))

    @property
    def parts(self) -> tuple:
        return self._c

    @property
    def a(self) -> Fraction:
        return self._c[0]

    @property
    def b(self) -> Fraction:
        return self._c[1]

    @property
    def c(self) -> Fraction:
        return self._c[2]

    @property
    def d(self) -> Fraction:
        return self._c[3]

    def is_rational(self) -> bool:
        return not (self._c[1] or self._c[2] or self._c[3])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._c[0]

    def __bool__(self) -> bool:
        return any(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElem):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == (Fraction(other), 0, 0, 0)
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self._c[0])
        return hash(self._c)

    def __neg__(self) -> FieldElem:
        a, b, c, d = self._c
        return FieldElem._raw((-a, -b, -c, -d))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            a, b, c, d = self._c
            return FieldElem._raw((a + other, b, c, d))
        if not isinstance(other, FieldElem):
            return NotImplemented
        x, y = self._c, other._c
        return FieldElem._raw((x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, FieldElem)):
            return self + (-FieldElem.coerce(other))
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElem.coerce(other) - self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            a, b, c, d = self._c
            return FieldElem._raw((a * other, b * other, c * other, d * other))
        if not isinstance(other, FieldElem):
            return NotImplemented
        a, b, c, d = self._c
        e, f, g, h = other._c
        if not (b or c or d):
            return FieldElem._raw((a * e, a * f, a * g, a * h))
        if not (f or g or h):
            return FieldElem._raw((a * e, b * e, c * e, d * e))
        return FieldElem._raw((
            a * e + 2 * b * f + 3 * c * g + 6 * d * h,
            a * f + b * e + 3 * (c * h + d * g),
            a * g + c * e + 2 * (b * h + d * f),
            a * h + d * e + b * g + c * f,
        ))

    __rmul__ = __mul__

    def conj2(self) -> FieldElem:
        """Image under r2 -> -r2."""
        a, b, c, d = self._c
        return FieldElem._raw((a, -b, c, -d))

    def conj3(self) -> FieldElem:
        """Image under r3 -> -r3."""
        a, b, c, d = self._c
        return FieldElem._raw((a, b, -c, -d))

    def norm(self) -> Fraction:
        """Product of the four Galois conjugates."""
        m = self * self.conj2()
        return (m * m.conj3()).a

    def inverse(self) -> FieldElem:
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(r2,r3)")
        if self.is_rational():
            return FieldElem._raw((1 / self._c[0], Fraction(0), Fraction(0), Fraction(0)))
        m = self * self.conj2()  # lies in Q(r3)
        p, q = m.a, m.c
        n = p * p - 3 * q * q
        return self.conj2() * FieldElem(p / n, 0, -q / n, 0)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(r2,r3)")
            return self * (Fraction(1) / Fraction(other))
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElem.coerce(other) * self.inverse()
        return NotImplemented

    def __pow__(self, n: int) -> FieldElem:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = FieldElem(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __float__(self) -> float:
        a, b, c, d = self._c
        return float(a) + float(b) * math.sqrt(2) + float(c) * math.sqrt(3) + float(d) * math.sqrt(6)

    def sign(self) -> int:
        """Exact sign, decided by comparing squares of the rational and irrational parts."""
        if not self:
            return 0
        # x = u + v*r3 with u, v in Q(r2); sign(u + v r3) resolved via norms
        u = FieldElem(self.a, self.b)
        v = FieldElem(self.c, self.d)
        su, sv = _sign_qr2(u.a, u.b), _sign_qr2(v.a, v.b)
        if sv == 0:
            return su
        if su == 0 or su == sv:
            return su or sv
        # opposite signs: compare u^2 with 3 v^2
        diff = u * u - 3 * (v * v)
        return su * _sign_qr2(diff.a, diff.b)

    def render(self) -> str:
        """Text form using p/q literals and r2, r3, r6."""
        pieces = []
        for q, rad in zip(self._c, _RADICALS):
            if not q:
                continue
            if rad == "":
                body = render_rational(abs(q))
            elif abs(q) == 1:
                body = rad
            else:
                body = f"{render_rational(abs(q))}*{rad}"
            pieces.append(("-" if q < 0 else "+", body))
        if not pieces:
            return "0"
        text = "".join(f"{s}{b}" for s, b in pieces)
        return text[1:] if text.startswith("+") else text

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"FieldElem({self.render()})"


def _sign_qr2(a: Fraction, b: Fraction) -> int:
    if not b:
        return (a > 0) - (a < 0)
    if not a:
        return (b > 0) - (b < 0)
    sa, sb = (a > 0) - (a < 0), (b > 0) - (b < 0)
    if sa == sb:
        return sa
    return sa if a * a > 2 * b * b else sb


R2 = FieldElem(0, 1)
R3 = FieldElem(0, 0, 1)
R6 = FieldElem(0, 0, 0, 1)
ZERO = FieldElem(0)
ONE = FieldElem(1)

Scalar = Union[int, Fraction, FieldElem]


def field_arith(x: Scalar, y: Scalar, op: str) -> FieldElem:
    x, y = FieldElem.coerce(x), FieldElem.coerce(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown field operation {op!r}")


class RingMismatch(ValueError):
    """Two time scalars with different ring parameters were combined."""


class TimeScalar:
    """Finite sum of ``coeff * (1+k t)^p * e^(r t)`` with a fixed ``k``.

    Keys are ``(p, r)``; zero coefficients are never stored. When ``k == 0``
    the power factor is identically 1, so every ``p`` collapses to 0.
    """

    __slots__ = ("k", "terms")

    def __init__(self, k=0, terms: Mapping | None = None):
        self.k = as_fraction(k)
        out: dict = {}
        for (p, r), c in (terms or {}).items():
            key = (Fraction(0) if self.k == 0 else as_fraction(p), as_fraction(r))
            out[key] = out.get(key, ZERO) + FieldElem.coerce(c)
        self.terms = {key: c for key, c in out.items() if c}

    @classmethod
    def _raw(cls, k: Fraction, terms: dict) -> TimeScalar:
        obj = object.__new__(cls)
        obj.k = k
        obj.terms = terms
        return obj

    @classmethod
    def const(cls, c, k=0) -> TimeScalar:
        return cls(k, {(0, 0): c})

    @classmethod
    def power(cls, k, p, coeff=1) -> TimeScalar:
        """``coeff * (1+k t)^p``."""
        return cls(k, {(p, 0): coeff})

    @classmethod
    def exp(cls, rate, coeff=1, k=0) -> TimeScalar:
        """``coeff * e^(rate t)``."""
        return cls(k, {(0, rate): coeff})

    def _check(self, other: TimeScalar) -> None:
        if self.k != other.k:
            raise RingMismatch(f"ring parameters differ: k={self.k} vs k={other.k}")

    def _lift(self, other):
        if isinstance(other, TimeScalar):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, FieldElem)):
            return TimeScalar._raw(self.k, {(Fraction(0), Fraction(0)): FieldElem.coerce(other)} if other else {})
        return None

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, TimeScalar):
            return self.k == other.k and self.terms == other.terms
        if isinstance(other, (int, Fraction, FieldElem)):
            lifted = self._lift(other)
            return self.terms == lifted.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.k, frozenset(self.terms.items())))

    def __neg__(self) -> TimeScalar:
        return TimeScalar._raw(self.k, {key: -c for key, c in self.terms.items()})

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key)
            s = c if s is None else s + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return TimeScalar._raw(self.k, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElem)):
            if not other:
                return TimeScalar._raw(self.k, {})
            return TimeScalar._raw(self.k, {key: c * other for key, c in self.terms.items()})
        if not isinstance(other, TimeScalar):
            return NotImplemented
        self._check(other)
        out: dict = {}
        for (p1, r1), c1 in self.terms.items():
            for (p2, r2), c2 in other.terms.items():
                key = (p1 + p2, r1 + r2)
                s = out.get(key)
                out[key] = c1 * c2 if s is None else s + c1 * c2
        return TimeScalar._raw(self.k, {key: c for key, c in out.items() if c})

    __rmul__ = __mul__

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def inverse(self) -> TimeScalar:
        if not self.is_monomial():
            raise ValueError("only single monomials are invertible in the time ring")
        ((p, r), c), = self.terms.items()
        return TimeScalar._raw(self.k, {(-p, -r): c.inverse()})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, FieldElem)):
            return self * FieldElem.coerce(other).inverse()
        if isinstance(other, TimeScalar):
            return self * other.inverse()
        return NotImplemented

    def ddt(self) -> TimeScalar:
        """Termwise derivative; exact."""
        out: dict = {}
        k = self.k
        for (p, r), c in self.terms.items():
            if r:
                key = (p, r)
                out[key] = out.get(key, ZERO) + c * r
            if p:
                key = (p - 1, r)
                out[key] = out.get(key, ZERO) + c * (p * k)
        return TimeScalar._raw(k, {key: c for key, c in out.items() if c})

    def log_derivative(self) -> TimeScalar:
        """``x'/x`` for a monomial ``x``."""
        return self.ddt() * self.inverse()

    def constant_term(self) -> FieldElem:
        return self.terms.get((Fraction(0), Fraction(0)), ZERO)

    def is_constant(self) -> bool:
        return all(key == (0, 0) for key in self.terms)

    def __call__(self, t) -> float:
        return ts_eval(self, t)

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for (p, r), c in sorted(self.terms.items()):
            factors = []
            if p:
                factors.append(f"(1+{render_rational(self.k)}*t)^{render_rational(p)}")
            if r:
                factors.append(f"exp({render_rational(r)}*t)")
            coeff = c.render()
            if not factors:
                pieces.append(coeff)
                continue
            if coeff == "1":
                pieces.append("*".join(factors))
            elif coeff == "-1":
                pieces.append("-" + "*".join(factors))
            else:
                if sum(1 for q in c.parts if q) > 1:
                    coeff = f"({coeff})"
                pieces.append(coeff + "*" + "*".join(factors))
        text = "+".join(pieces)
        return text.replace("+-", "-")

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"TimeScalar(k={render_rational(self.k)}: {self.render()})"


def ts_arith(x: TimeScalar, y: TimeScalar, op: str) -> TimeScalar:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown time-scalar operation {op!r}")


def ts_ddt(x: TimeScalar) -> TimeScalar:
    return x.ddt()


def ts_eval(x: TimeScalar, t) -> float:
    """Floating value at ``t``; for spot checks only."""
    t = as_fraction(t) if not isinstance(t, float) else t
    base = 1 + x.k * t
    has_power = any(p for p, _ in x.terms)
    if has_power and base <= 0:
        raise ValueError(f"1+k*t = {base} is not positive at t={t}")
    total = 0.0
    fbase = float(base)
    ft = float(t)
    for (p, r), c in x.terms.items():
        val = float(c)
        if p:
            val *= fbase ** float(p)
        if r:
            val *= math.exp(float(r) * ft)
        total += val
    return total


class AnsatzScalar:
    """Sum of ``coeff * (1+k t)^(m . alpha)`` with the exponent vector ``m`` symbolic.

    Keys are tuples of rationals (one entry per unknown exponent); values are
    ``FieldElem``. Substituting concrete exponents yields a ``TimeScalar``.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping | None = None):
        self.nvars = nvars
        out: dict = {}
        for key, c in (terms or {}).items():
            key = tuple(as_fraction(v) for v in key)
            if len(key) != nvars:
                raise ValueError("exponent vector has the wrong length")
            out[key] = out.get(key, ZERO) + FieldElem.coerce(c)
        self.terms = {key: c for key, c in out.items() if c}

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> AnsatzScalar:
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        return obj

    @classmethod
    def variable_power(cls, nvars: int, index: int, coeff=1) -> AnsatzScalar:
        """``coeff * (1+k t)^(alpha_index)`` with 0-based ``index``."""
        key = tuple(Fraction(int(i == index)) for i in range(nvars))
        return cls._raw(nvars, {key: FieldElem.coerce(coeff)})

    def _zero_key(self) -> tuple:
        return (Fraction(0),) * self.nvars

    def _lift(self, other):
        if isinstance(other, AnsatzScalar):
            if other.nvars != self.nvars:
                raise ValueError("exponent spaces differ")
            return other
        if isinstance(other, (int, Fraction, FieldElem)):
            return AnsatzScalar._raw(self.nvars, {self._zero_key(): FieldElem.coerce(other)} if other else {})
        return None

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __neg__(self) -> AnsatzScalar:
        return AnsatzScalar._raw(self.nvars, {key: -c for key, c in self.terms.items()})

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key)
            s = c if s is None else s + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return AnsatzScalar._raw(self.nvars, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElem)):
            if not other:
                return AnsatzScalar._raw(self.nvars, {})
            return AnsatzScalar._raw(self.nvars, {key: c * other for key, c in self.terms.items()})
        if not isinstance(other, AnsatzScalar):
            return NotImplemented
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(k1, k2))
                s = out.get(key)
                out[key] = c1 * c2 if s is None else s + c1 * c2
        return AnsatzScalar._raw(self.nvars, {key: c for key, c in out.items() if c})

    __rmul__ = __mul__

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def inverse(self) -> AnsatzScalar:
        if not self.is_monomial():
            raise ValueError("only single monomials are invertible")
        (key, c), = self.terms.items()
        return AnsatzScalar._raw(self.nvars, {tuple(-v for v in key): c.inverse()})

    def substitute(self, exponents: Sequence, k) -> TimeScalar:
        """Evaluate the exponent forms at concrete ``exponents``."""
        exps = [as_fraction(e) for e in exponents]
        out: dict = {}
        for key, c in self.terms.items():
            p = sum((m * e for m, e in zip(key, exps)), Fraction(0))
            out[(p, 0)] = out.get((p, 0), ZERO) + c
        return TimeScalar(k, out)

    def render(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"a{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        pieces = []
        for key, c in sorted(self.terms.items()):
            expo = render_linear(key, names)
            coeff = c.render()
            if sum(1 for q in c.parts if q) > 1:
                coeff = f"({coeff})"
            if expo == "0":
                pieces.append(coeff)
            else:
                pieces.append(f"{coeff}*(1+k*t)^({expo})")
        return "+".join(pieces).replace("+-", "-")

    def __repr__(self) -> str:
        return f"AnsatzScalar({self.render()})"


def render_linear(coeffs: Iterable, names: Sequence[str]) -> str:
    out = []
    for q, name in zip(coeffs, names):
        if not q:
            continue
        if q == 1:
            out.append(f"+{name}")
        elif q == -1:
            out.append(f"-{name}")
        else:
            out.append(f"{'+' if q > 0 else '-'}{render_rational(abs(q))}*{name}")
    if not out:
        return "0"
    text = "".join(out)
    return text[1:] if text.startswith("+") else text
