"""Recursive-descent parser for structure equations in Salamon notation.

Grammar (whitespace ignored)::

    list   := "(" entry ("," entry)* ")"
    entry  := "0" | sum
    sum    := ["+"|"-"] term (("+"|"-") term)*
    term   := [coeff ["*"]] "h" digit digit
    coeff  := rational [["*"] radical] | radical | "(" csum ")"
    csum   := ["+"|"-"] catom (("+"|"-") catom)*
    catom  := rational [["*"] radical] | radical
    radical:= "r2" | "r3" | "r6"

``h13`` stands for ``h^1 ^ h^3``.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import FieldElem, R2, R3, R6

_RADICAL = {"r2": R2, "r3": R3, "r6": R6}


class NotationError(ValueError):
    """Malformed structure equations; ``offset`` is the byte position."""

    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        pointer = ""
        if text:
            pointer = f"\n  {text}\n  {' ' * offset}^"
        super().__init__(f"{message} at offset {offset}{pointer}")


class _Parser:
    def __init__(self, text: str, dim: int):
        self.text = text
        self.dim = dim
        self.pos = 0

    def error(self, message: str):
        raise NotationError(message, self.pos, self.text)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def peek2(self) -> str:
        self.skip()
        return self.text[self.pos:self.pos + 2]

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek() or "end of input"
            self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def parse_list(self) -> list:
        self.expect("(")
        entries = [self.parse_entry()]
        while self.peek() == ",":
            self.pos += 1
            entries.append(self.parse_entry())
        self.expect(")")
        if self.peek():
            self.error("trailing characters after structure equations")
        if len(entries) != self.dim:
            self.pos = 0
            self.error(f"expected {self.dim} entries, found {len(entries)}")
        return entries

    def parse_entry(self) -> dict:
        start = self.pos
        terms: dict = {}
        if self.peek() == "0":
            save = self.pos
            self.pos += 1
            if self.peek() in (",", ")"):
                return terms
            self.pos = save
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        self.parse_term(sign, terms)
        while self.peek() in ("+", "-") and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
            self.parse_term(sign, terms)
        if self.peek() not in (",", ")"):
            self.error(f"unexpected {self.peek()!r} in entry starting at offset {start}")
        return {k: v for k, v in terms.items() if v}

    def parse_term(self, sign: int, terms: dict) -> None:
        coeff = FieldElem(sign)
        if self.peek() != "h":
            coeff = coeff * self.parse_coeff()
            if self.peek() == "*":
                self.pos += 1
        if self.peek() != "h":
            self.error("expected a basis element 'hij'")
        self.pos += 1
        digits = self.text[self.pos:self.pos + 2]
        if len(digits) != 2 or not digits.isdigit():
            self.error("expected two digits after 'h'")
        i, j = int(digits[0]), int(digits[1])
        for idx in (i, j):
            if not 1 <= idx <= self.dim:
                self.error(f"index {idx} out of range 1..{self.dim}")
        if i == j:
            self.error(f"repeated index in h{digits}")
        self.pos += 2
        if i > j:
            i, j = j, i
            coeff = -coeff
        key = (i, j)
        terms[key] = terms.get(key, FieldElem(0)) + coeff

    def parse_coeff(self) -> FieldElem:
        if self.peek() == "(":
            self.pos += 1
            val = self.parse_csum()
            self.expect(")")
            return val
        return self.parse_catom()

    def parse_csum(self) -> FieldElem:
        sign = 1
        if self.peek() in ("+", "-") and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        total = self.parse_catom() * sign
        while self.peek() in ("+", "-") and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
            total = total + self.parse_catom() * sign
        return total

    def parse_catom(self) -> FieldElem:
        if self.peek2() in _RADICAL:
            rad = _RADICAL[self.peek2()]
            self.pos += 2
            return rad
        if not self.peek().isdigit():
            self.error("expected a coefficient")
        value = self.parse_rational()
        if self.peek() == "*" and self.text[self.pos + 1:self.pos + 3].strip() in _RADICAL:
            self.pos += 1
        if self.peek2() in _RADICAL:
            rad = _RADICAL[self.peek2()]
            self.pos += 2
            return rad * value
        return FieldElem(value)

    def parse_rational(self) -> Fraction:
        num = self.parse_int()
        if self.peek() == "/":
            self.pos += 1
            den = self.parse_int()
            if den == 0:
                self.error("zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    def parse_int(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])


def parse_entries(text: str, dim: int) -> list:
    """Parse structure equations into one ``{(i, j): FieldElem}`` map per generator."""
    return _Parser(text, dim).parse_list()


def render_coeff(c: FieldElem) -> str:
    """Coefficient in the grammar's syntax; parenthesised when it has several parts."""
    nonzero = [q for q in c.parts if q]
    if len(nonzero) == 1:
        text = c.render().replace("*", "")
        return text
    return f"({c.render().replace('*', '')})"


def render_entry(terms: dict) -> str:
    if not terms:
        return "0"
    pieces = []
    for (i, j) in sorted(terms):
        c = terms[(i, j)]
        text = render_coeff(c)
        label = f"h{i}{j}"
        if text == "1":
            pieces.append(f"+{label}")
        elif text == "-1":
            pieces.append(f"-{label}")
        elif text.startswith("-"):
            pieces.append(f"{text}{label}")
        else:
            pieces.append(f"+{text}{label}")
    out = "".join(pieces)
    return out[1:] if out.startswith("+") else out


def render_entries(entries: list) -> str:
    return "(" + ",".join(render_entry(e) for e in entries) + ")"
