"""Homogeneous plane curves: evaluation, singular points, fitting and component bookkeeping."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from . import linalg
from .cycfield import CycNum, Scalar, as_cycnum, lift_all
from .errors import DegenerateError, DomainError
from .projgeom import ProjLine, ProjPoint

Monomial = tuple[int, int, int]


@lru_cache(maxsize=None)
def monomials(d: int) -> tuple[Monomial, ...]:
    """Exponent triples of degree d: x^d first, then x^(d-1)y, ..., z^d last."""
    return tuple((i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1))


def _powers(v: CycNum, d: int) -> list[CycNum]:
    out = [CycNum.one(v.order)]
    for _ in range(d):
        out.append(out[-1] * v)
    return out


class Curve:
    """A homogeneous polynomial of degree ``degree``, optionally with a known factorization.

    ``components`` is a list of (Curve, multiplicity). When it is empty the
    curve is treated as a single component.
    """

    __slots__ = ("degree", "coeffs", "components")

    def __init__(
        self,
        degree: int,
        coeffs: Mapping[Monomial, Scalar],
        components: Sequence[tuple[Curve, int]] | None = None,
    ):
        if degree < 1:
            raise ValueError(f"curve degree must be positive, got {degree}")
        items = [(tuple(m), as_cycnum(c)) for m, c in coeffs.items()]
        for m, _ in items:
            if len(m) != 3 or min(m) < 0 or sum(m) != degree:
                raise ValueError(f"monomial {m} is not of degree {degree}")
        vals = lift_all([c for _, c in items]) if items else []
        clean = {m: c for (m, _), c in zip(items, vals) if c}
        if not clean:
            raise DegenerateError("the zero polynomial does not define a curve")
        self.degree = degree
        self.coeffs: dict[Monomial, CycNum] = {m: clean[m] for m in monomials(degree) if m in clean}
        comps = list(components or [])
        if comps and sum(c.degree * k for c, k in comps) != degree:
            raise ValueError("component degrees do not add up to the curve degree")
        self.components: list[tuple[Curve, int]] = comps

    # constructors

    @classmethod
    def line(cls, l: ProjLine) -> Curve:
        a, b, c = l.coords
        return cls(1, {(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c})

    @classmethod
    def product(cls, factors: Sequence[tuple[Curve, int]]) -> Curve:
        """Multiply factors together and remember them as components."""
        acc: Curve | None = None
        for f, k in factors:
            for _ in range(k):
                acc = f if acc is None else acc._mul(f)
        if acc is None:
            raise ValueError("empty factor list")
        return cls(acc.degree, acc.coeffs, [(f.bare(), k) for f, k in factors])

    def bare(self) -> Curve:
        """The same polynomial without component data."""
        return Curve(self.degree, self.coeffs)

    def with_components(self, components: Sequence[tuple[Curve, int]]) -> Curve:
        return Curve(self.degree, self.coeffs, components)

    # structure

    @property
    def order(self) -> int:
        return next(iter(self.coeffs.values())).order

    def component_list(self) -> list[tuple[Curve, int]]:
        return self.components if self.components else [(self.bare(), 1)]

    def coefficient(self, m: Monomial) -> CycNum:
        return self.coeffs.get(m, CycNum.zero(self.order))

    def coefficient_vector(self) -> list[CycNum]:
        return [self.coefficient(m) for m in monomials(self.degree)]

    def normalized(self) -> Curve:
        """Scale so the leading coefficient (in monomial order) is 1."""
        lead = next(iter(self.coeffs.values()))
        inv = lead.inverse()
        return Curve(self.degree, {m: c * inv for m, c in self.coeffs.items()}, self.components)

    def proportional(self, other: Curve) -> bool:
        return self.degree == other.degree and self.normalized().coeffs == other.normalized().coeffs

    def as_line(self) -> ProjLine:
        if self.degree != 1:
            raise ValueError("not a line")
        return ProjLine([self.coefficient(m) for m in monomials(1)])

    def _mul(self, other: Curve) -> Curve:
        out: dict[Monomial, CycNum] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                out[m] = out[m] + c1 * c2 if m in out else c1 * c2
        return Curve(self.degree + other.degree, out)

    def __mul__(self, other: Curve) -> Curve:
        if not isinstance(other, Curve):
            return NotImplemented
        return Curve.product(self.component_list() + other.component_list())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Curve):
            return NotImplemented
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.degree, tuple(self.coeffs.items())))

    def __str__(self) -> str:
        terms = []
        for (i, j, k), c in self.coeffs.items():
            mono = "".join(
                v + (f"^{e}" if e > 1 else "") for v, e in (("x", i), ("y", j), ("z", k)) if e
            )
            cs = str(c)
            if not mono:
                terms.append(cs)
            elif cs == "1":
                terms.append(mono)
            elif cs == "-1":
                terms.append("-" + mono)
            elif c.is_rational():
                terms.append(f"{cs}*{mono}")
            else:
                terms.append(f"({cs})*{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Curve({self})"

    # calculus

    def partial(self, var: int) -> dict[Monomial, CycNum]:
        """Coefficients of the partial derivative in variable 0, 1 or 2."""
        out = {}
        for m, c in self.coeffs.items():
            if m[var]:
                nm = list(m)
                nm[var] -= 1
                out[tuple(nm)] = c * m[var]
        return out


def _eval_terms(terms: Mapping[Monomial, CycNum], coords: Sequence[CycNum], d: int) -> CycNum:
    sample = [next(iter(terms.values()))] if terms else []
    vals = lift_all(list(coords) + sample)
    px, py, pz = (_powers(v, d) for v in vals[:3])
    acc = CycNum.zero(vals[0].order)
    for (i, j, k), c in terms.items():
        acc = acc + c * px[i] * py[j] * pz[k]
    return acc


def evaluate(c: Curve, p: ProjPoint | Sequence[Scalar]) -> CycNum:
    """Exact value at the stored representative of p."""
    coords = [as_cycnum(v) for v in (p.coords if isinstance(p, ProjPoint) else p)]
    return _eval_terms(c.coeffs, coords, c.degree)


def gradient(c: Curve, p: ProjPoint | Sequence[Scalar]) -> tuple[CycNum, CycNum, CycNum]:
    coords = [as_cycnum(v) for v in (p.coords if isinstance(p, ProjPoint) else p)]
    return tuple(_eval_terms(c.partial(v), coords, c.degree - 1) for v in range(3))  # type: ignore[return-value]


def on_curve(c: Curve, p: ProjPoint) -> bool:
    return not evaluate(c, p)


def is_singular(c: Curve, p: ProjPoint) -> bool:
    if evaluate(c, p):
        raise DomainError(f"point {p} is not on the curve")
    return not any(gradient(c, p))


def tangent_line(c: Curve, p: ProjPoint) -> ProjLine:
    g = gradient(c, p)
    if not any(g):
        raise DomainError(f"no tangent line at the singular point {p}")
    return ProjLine(g)


@dataclass(frozen=True)
class CurveMembership:
    point: ProjPoint
    on_curve: bool
    singular: bool
    component_index: int | None


def membership(c: Curve, p: ProjPoint) -> CurveMembership:
    if evaluate(c, p):
        return CurveMembership(p, False, False, None)
    singular = not any(gradient(c, p))
    hits = [i for i, (comp, _) in enumerate(c.component_list()) if not evaluate(comp, p)]
    idx = hits[0] if len(hits) == 1 and not singular else None
    return CurveMembership(p, True, singular, idx)


# fitting


def monomial_row(p: ProjPoint, d: int) -> list[CycNum]:
    px, py, pz = (_powers(v, d) for v in p.coords)
    return [px[i] * py[j] * pz[k] for i, j, k in monomials(d)]


def fit_curve(points: Sequence[ProjPoint], d: int) -> Curve | None:
    """A degree-d curve through all points, or None if none exists.

    Picks the nullspace vector attached to the first free column of the
    reduced monomial matrix, scaled so its leading coefficient is 1.
    """
    if d < 1:
        raise ValueError("degree must be at least 1")
    mons = monomials(d)
    if not points:
        return Curve(d, {mons[0]: 1})
    order = lift_all([c for p in points for c in p.coords])[0].order
    pts = [p.embed(order) if p.order != order else p for p in points]
    rows = [monomial_row(p, d) for p in pts]
    basis = linalg.nullspace(rows, zero=CycNum.zero(order), one=CycNum.one(order))
    if not basis:
        return None
    curve = Curve(d, dict(zip(mons, basis[0]))).normalized()
    if any(evaluate(curve, p) for p in pts):  # pragma: no cover - would mean an elimination bug
        raise AssertionError("fitted curve misses an input point")
    return curve


def points_on_line(l: ProjLine, count: int) -> list[ProjPoint]:
    """``count`` distinct points P + tQ, t = 0..count-2, plus Q."""
    p, q = l.points()
    out = [p]
    for t in range(1, count - 1):
        out.append(ProjPoint([a + b * t for a, b in zip(p.coords, q.coords)]))
    if count > 1:
        out.append(q)
    return out[:count]


def contains_line(c: Curve, l: ProjLine) -> bool:
    return all(not evaluate(c, p) for p in points_on_line(l, c.degree + 1))


def divide_by_line(c: Curve, l: ProjLine) -> Curve:
    """The quotient c / l; the line must be a component."""
    if c.degree == 1:
        if not Curve.line(l).proportional(c):
            raise DomainError("line does not divide the curve")
        raise DegenerateError("quotient of a line by itself is a constant")
    a = [l.coords[0], l.coords[1], l.coords[2]]
    src = monomials(c.degree - 1)
    dst = monomials(c.degree)
    pos = {m: i for i, m in enumerate(dst)}
    o = c.order if c.order % l.order == 0 else l.order
    zero = CycNum.zero(o)
    rows = [[zero] * len(src) for _ in dst]
    for col, m in enumerate(src):
        for v in range(3):
            if a[v]:
                nm = list(m)
                nm[v] += 1
                rows[pos[tuple(nm)]][col] = a[v]
    rhs = [c.coefficient(m) for m in dst]
    vals = lift_all([x for r in rows for x in r] + rhs)
    w = len(src)
    rows = [vals[i * w:(i + 1) * w] for i in range(len(dst))]
    rhs = vals[len(dst) * w:]
    sol = linalg.solve(rows, rhs)
    if sol is None:
        raise DomainError("line does not divide the curve")
    return Curve(c.degree - 1, dict(zip(src, sol)))


def conic_is_degenerate(c: Curve) -> bool:
    if c.degree != 2:
        raise ValueError("not a conic")
    g = c.coefficient
    half = CycNum.rational(1, 1) / 2
    m = [
        [g((2, 0, 0)), g((1, 1, 0)) * half, g((1, 0, 1)) * half],
        [g((1, 1, 0)) * half, g((0, 2, 0)), g((0, 1, 1)) * half],
        [g((1, 0, 1)) * half, g((0, 1, 1)) * half, g((0, 0, 2))],
    ]
    return not linalg.det(m)


def factor_lines(c: Curve, candidates: Iterable[ProjLine]) -> Curve:
    """Split off every candidate line that divides c; the rest is kept as one component.

    Components are returned with multiplicities, lines first in candidate order.
    """
    rest: Curve | None = c.bare()
    found: list[list] = []
    for l in dict.fromkeys(candidates):
        while rest is not None and contains_line(rest, l):
            if rest.degree == 1:
                rest_line = None
            else:
                rest_line = divide_by_line(rest, l)
            for entry in found:
                if entry[0] == l:
                    entry[1] += 1
                    break
            else:
                found.append([l, 1])
            rest = rest_line
    comps = [(Curve.line(l), k) for l, k in found]
    if rest is not None:
        comps.append((rest.normalized(), 1))
    return c.with_components(comps)


# substitution and restriction


def substitute(c: Curve, matrix: Sequence[Sequence[Scalar]]) -> Curve:
    """The curve g(v) = c(M v): the image of c under the point map v -> M^-1 v."""
    forms: list[dict[Monomial, CycNum]] = []
    for row in matrix:
        forms.append({(1, 0, 0): as_cycnum(row[0]), (0, 1, 0): as_cycnum(row[1]), (0, 0, 1): as_cycnum(row[2])})

    def mul(f, g):
        out: dict[Monomial, CycNum] = {}
        for m1, c1 in f.items():
            if not c1:
                continue
            for m2, c2 in g.items():
                if not c2:
                    continue
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                out[m] = out[m] + c1 * c2 if m in out else c1 * c2
        return out

    pw = []
    for f in forms:
        seq = [{(0, 0, 0): CycNum.one(1)}]
        for _ in range(c.degree):
            seq.append(mul(seq[-1], f))
        pw.append(seq)
    total: dict[Monomial, CycNum] = {}
    for (i, j, k), coef in c.coeffs.items():
        term = mul(mul(pw[0][i], pw[1][j]), pw[2][k])
        for m, v in term.items():
            v = v * coef
            total[m] = total[m] + v if m in total else v
    return Curve(c.degree, total)


def transform_curve(c: Curve, t) -> Curve:
    """Image of c under the projective transform t, components included."""
    inv = t.inverse().matrix
    img = substitute(c, inv)
    comps = [(substitute(comp, inv).normalized(), k) for comp, k in c.components]
    return img.with_components(comps) if comps else img


def restrict_to_line(c: Curve, p: ProjPoint | Sequence[CycNum], q: ProjPoint | Sequence[CycNum]) -> list[CycNum]:
    """Coefficients a_0..a_d of t -> c(p + t q), lowest first (a_d = c(q))."""
    pc = [as_cycnum(v) for v in (p.coords if isinstance(p, ProjPoint) else p)]
    qc = [as_cycnum(v) for v in (q.coords if isinstance(q, ProjPoint) else q)]
    d = c.degree
    vals = []
    for t in range(d + 1):
        vals.append(_eval_terms(c.coeffs, [a + b * t for a, b in zip(pc, qc)], d))
    vals = lift_all(vals)
    o = vals[0].order
    rows = [[CycNum.rational(t**e, o) for e in range(d + 1)] for t in range(d + 1)]
    sol = linalg.solve(rows, vals)
    assert sol is not None
    return sol


# configurations


@dataclass
class Partition:
    """Index lists: ``parts[j]`` holds points smooth on component j only, ``errors`` the rest."""

    parts: list[list[int]]
    errors: list[int] = field(default_factory=list)

    def sizes(self) -> list[int]:
        return [len(p) for p in self.parts]


def _points_of(config) -> list[ProjPoint]:
    return list(config.points) if hasattr(config, "points") else list(config)


def assign_components(config, c: Curve) -> Partition:
    pts = _points_of(config)
    comps = c.component_list()
    parts: list[list[int]] = [[] for _ in comps]
    errors = []
    for i, p in enumerate(pts):
        mem = membership(c, p)
        if mem.component_index is None:
            errors.append(i)
        else:
            parts[mem.component_index].append(i)
    return Partition(parts, errors)
