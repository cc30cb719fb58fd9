"""Exact Gauss-Jordan elimination over Q or Q(r2, r3)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class SingularSystem(ArithmeticError):
    pass


def rref(rows: Sequence[Sequence]) -> tuple:
    """Reduced row echelon form; returns ``(matrix, pivot_columns)``."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv if v else v for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b if b else a for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list:
    """Basis of ``{v : rows @ v = 0}``."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    m, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(m, pivots):
            if row[f]:
                v[p] = -row[f]
        out.append(v)
    return out


def inverse(rows: Sequence[Sequence]) -> list:
    n = len(rows)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise SingularSystem("matrix is singular")
    return [row[n:] for row in m[:n]]


def apply(matrix: Sequence[Sequence], vec: Sequence) -> list:
    """``matrix @ vec`` where ``vec`` may hold any ring elements."""
    out = []
    for row in matrix:
        acc = 0
        for a, v in zip(row, vec):
            if a and v:
                acc = v * a + acc
        out.append(acc)
    return out


def transpose(rows: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*rows)]


def solve_affine(rows: Sequence[Sequence], rhs: Sequence):
    """Solve ``rows @ z = rhs``; returns ``(particular, nullspace_basis)`` or ``None``."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    m, pivots = rref(aug)
    if ncols in pivots:
        return None
    part = [Fraction(0)] * ncols
    for row, p in zip(m, pivots):
        part[p] = row[ncols]
    return part, nullspace([row[:ncols] for row in m], ncols) if m else nullspace([], ncols)
