"""Dense univariate polynomials over a field (CycNum or Fraction), lowest degree first."""
from __future__ import annotations

from .cycfield import CycNum

Poly = list[CycNum]


def trim(p: Poly) -> Poly:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def degree(p: Poly) -> int:
    p = trim(p)
    return len(p) - 1


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        if i < len(p) and i < len(q):
            out.append(p[i] + q[i])
        else:
            out.append(p[i] if i < len(p) else q[i])
    return trim(out)


def neg(p: Poly) -> Poly:
    return [-c for c in p]


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, neg(q))


def mul(p: Poly, q: Poly) -> Poly:
    p, q = trim(p), trim(q)
    if not p or not q:
        return []
    out = [p[0] * 0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    out[i + j] = out[i + j] + a * b
    return trim(out)


def scale(p: Poly, c) -> Poly:
    return trim([a * c for a in p])


def divmod_(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    p, q = trim(p), trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    if len(p) < len(q):
        return [], p
    r = list(p)
    lead_inv = 1 / q[-1]
    out = [q[0] * 0] * (len(p) - len(q) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = r[i + len(q) - 1] * lead_inv
        out[i] = c
        if c:
            for j, b in enumerate(q):
                r[i + j] = r[i + j] - c * b
    return trim(out), trim(r[: len(q) - 1])


def monic(p: Poly) -> Poly:
    p = trim(p)
    if not p:
        return p
    inv = 1 / p[-1]
    return [c * inv for c in p]


def gcd(p: Poly, q: Poly) -> Poly:
    a, b = trim(p), trim(q)
    while b:
        _, r = divmod_(a, b)
        a, b = b, r
    return monic(a)


def derivative(p: Poly) -> Poly:
    return trim([c * k for k, c in enumerate(p)][1:])


def evaluate(p: Poly, x):
    acc = None
    for c in reversed(p):
        acc = c if acc is None else acc * x + c
    return acc if acc is not None else x * 0


def squarefree_part(p: Poly) -> Poly:
    p = trim(p)
    if len(p) <= 1:
        return monic(p)
    g = gcd(p, derivative(p))
    q, r = divmod_(p, g)
    assert not r
    return monic(q)


def distinct_root_count(p: Poly) -> int:
    """Number of distinct roots over the algebraic closure (p must be nonzero)."""
    p = trim(p)
    if not p:
        raise ValueError("zero polynomial has infinitely many roots")
    return degree(squarefree_part(p))


def constant(c: CycNum) -> Poly:
    return trim([c])
