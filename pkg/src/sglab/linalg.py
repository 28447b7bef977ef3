"""Exact Gaussian elimination over any field whose elements support + - * / and truthiness.

Pivoting is fixed: columns are scanned left to right and the first nonzero entry
at or below the current row is taken, so results are deterministic.
"""
from __future__ import annotations

from typing import Sequence, TypeVar

T = TypeVar("T")

Matrix = list[list[T]]


def rref(rows: Sequence[Sequence[T]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def nullspace(rows: Sequence[Sequence[T]], ncols: int | None = None, zero=0, one=1) -> list[list[T]]:
    """Basis of the right nullspace, one vector per free column (in column order)."""
    if not rows:
        if ncols is None:
            return []
        return [[one if j == i else zero for j in range(ncols)] for i in range(ncols)]
    ncols = len(rows[0])
    r, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = -r[i][f]
        basis.append(v)
    return basis


def rank(rows: Sequence[Sequence[T]]) -> int:
    return len(rref(rows)[1])


def det(rows: Sequence[Sequence[T]]):
    n = len(rows)
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    m = [list(r) for r in rows]
    sign = 1
    acc = None
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return m[0][0] * 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        piv = m[c][c]
        acc = piv if acc is None else acc * piv
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / piv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return acc if sign > 0 else -acc


def solve(rows: Sequence[Sequence[T]], rhs: Sequence[T]) -> list[T] | None:
    """One solution of A x = b (free variables set to zero), or None if inconsistent."""
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    r, pivots = rref(aug)
    if n in pivots:
        return None
    zero = rhs[0] * 0
    x = [zero] * n
    for i, pc in enumerate(pivots):
        x[pc] = r[i][n]
    return x


def matmul(a: Sequence[Sequence[T]], b: Sequence[Sequence[T]]) -> Matrix:
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), start=row[0] * 0) for col in cols] for row in a]


def matvec(a: Sequence[Sequence[T]], v: Sequence[T]) -> list[T]:
    return [sum((x * y for x, y in zip(row, v)), start=row[0] * 0) for row in a]


def transpose(a: Sequence[Sequence[T]]) -> Matrix:
    return [list(c) for c in zip(*a)]


def inverse3(a: Sequence[Sequence[T]]) -> Matrix:
    """Inverse of a 3x3 matrix via the adjugate."""
    (a0, a1, a2), (b0, b1, b2), (c0, c1, c2) = a
    adj = [
        [b1 * c2 - b2 * c1, a2 * c1 - a1 * c2, a1 * b2 - a2 * b1],
        [b2 * c0 - b0 * c2, a0 * c2 - a2 * c0, a2 * b0 - a0 * b2],
        [b0 * c1 - b1 * c0, a1 * c0 - a0 * c1, a0 * b1 - a1 * b0],
    ]
    d = a0 * adj[0][0] + a1 * adj[1][0] + a2 * adj[2][0]
    if not d:
        raise ZeroDivisionError("singular 3x3 matrix")
    dinv = 1 / d
    return [[x * dinv for x in row] for row in adj]


def cross(u: Sequence[T], v: Sequence[T]) -> list[T]:
    return [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]


def dot(u: Sequence[T], v: Sequence[T]):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
