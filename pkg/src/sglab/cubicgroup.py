"""Group laws on the smooth part of plane cubics.

Each cubic kind is moved to a normal position where an explicit rational
chart turns collinearity of three points into a zero sum (or unit product).
Smooth cubics use the chord-tangent law with an inflection point as identity.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Sequence

from . import linalg, upoly
from .curves import (
    Curve,
    conic_is_degenerate,
    evaluate,
    gradient,
    membership,
    restrict_to_line,
    substitute,
)
from .cycfield import CycNum, Scalar, as_cycnum, lift_all, nth_root, roots_of_unity
from .errors import ChartConstructionError, ComponentBalanceError, DegenerateError, DomainError
from .projgeom import (
    ProjLine,
    ProjPoint,
    ProjTransform,
    collinear,
    concurrent,
    meet,
    transform_mapping_lines,
    transform_mapping_points,
)


class CubicKind(str, Enum):
    THREE_LINES = "three-nonconcurrent-lines"
    CONCURRENT_LINES = "three-concurrent-lines"
    CONIC_LINE_SECANT = "conic-plus-line-2pt"
    CONIC_LINE_TANGENT = "conic-plus-line-1pt"
    NODAL = "nodal"
    CUSPIDAL = "cuspidal"
    SMOOTH = "smooth"

    @property
    def group(self) -> str:
        if self in (CubicKind.THREE_LINES, CubicKind.CONIC_LINE_SECANT, CubicKind.NODAL):
            return "multiplicative"
        if self is CubicKind.SMOOTH:
            return "chord-tangent"
        return "additive"


@dataclass(frozen=True)
class GroupElement:
    kind: CubicKind
    value: CycNum | ProjPoint
    component_index: int

    @property
    def group(self) -> str:
        return self.kind.group


# small helpers


def _pt(*coords: Scalar) -> ProjPoint:
    return ProjPoint(coords)


E1, E2, E3, UNIT = _pt(1, 0, 0), _pt(0, 1, 0), _pt(0, 0, 1), _pt(1, 1, 1)


def _second_point(l: ProjLine, avoid: ProjPoint | None = None) -> ProjPoint:
    for q in l.points():
        if q != avoid:
            return q
    raise DegenerateError("line has no second point")  # pragma: no cover


def _conic_meets_line(conic: Curve, l: ProjLine, hints: Sequence[ProjPoint] = ()) -> list[ProjPoint]:
    """Intersection points of a conic with a line, distinct, in the working field."""
    p, q = l.points()
    a0, a1, a2 = restrict_to_line(conic, p, q)
    if not a0 and not a1 and not a2:
        raise DegenerateError("line is a component of the conic")

    def at(t: CycNum) -> ProjPoint:
        return ProjPoint([x + y * t for x, y in zip(p.coords, q.coords)])

    if not a2:
        # q itself is a root
        pts = [q]
        if a1:
            pts.append(at(-a0 / a1))
        return list(dict.fromkeys(pts))
    disc = a1 * a1 - a0 * a2 * 4
    if not disc:
        return [at(-a1 / (a2 * 2))]
    root = nth_root(disc, 2)
    if root is None:
        known = [h for h in hints if l.contains(h) and not evaluate(conic, h)]
        if len(known) >= 2:
            return known[:2]
        raise ChartConstructionError(
            "conic and line meet in points outside the working field; supply them as hints"
        )
    return [at((-a1 + root) / (a2 * 2)), at((-a1 - root) / (a2 * 2))]


def _second_conic_point(conic: Curve, p: ProjPoint, direction: ProjPoint) -> ProjPoint | None:
    """The other intersection of the conic with the line through p and direction."""
    if direction == p:
        return None
    a0, a1, a2 = restrict_to_line(conic, p.coords, direction.coords)
    if not a2:
        return direction if a1 else None
    t = -a1 / a2
    if not t:
        return None
    return ProjPoint([x + y * t for x, y in zip(p.coords, direction.coords)])


def _conic_points(conic: Curve, base: ProjPoint, count: int, exclude: Sequence[ProjPoint] = ()) -> list[ProjPoint]:
    """Extra conic points found by sweeping lines through a known point."""
    out: list[ProjPoint] = []
    for a in range(0, 12):
        for b in range(-3, 4):
            cand = _second_conic_point(conic, base, _pt(1, a, b))
            for c in ([cand] if cand else []):
                if c != base and c not in exclude and c not in out:
                    out.append(c)
                    if len(out) == count:
                        return out
    raise ChartConstructionError("could not find enough points on the conic")  # pragma: no cover


def _pole(conic: Curve, l: ProjLine) -> ProjPoint:
    g = conic.coefficient
    m = [
        [g((2, 0, 0)) * 2, g((1, 1, 0)), g((1, 0, 1))],
        [g((1, 1, 0)), g((0, 2, 0)) * 2, g((0, 1, 1))],
        [g((1, 0, 1)), g((0, 1, 1)), g((0, 0, 2)) * 2],
    ]
    vals = lift_all([x for r in m for x in r] + list(l.coords))
    m = [vals[0:3], vals[3:6], vals[6:9]]
    return ProjPoint(linalg.matvec(linalg.inverse3(m), vals[9:12]))


def _binary_terms(c: Curve, zpow: int) -> dict[tuple[int, int], CycNum]:
    """Coefficients of the part of c carrying z^zpow, keyed by (x-exp, y-exp)."""
    return {(i, j): v for (i, j, k), v in c.coeffs.items() if k == zpow}


# singular points of irreducible cubics


def _as_y_poly(terms: dict, zero: CycNum) -> list[list[CycNum]]:
    """A form in x, y, z (dict of monomials) at z = 1 as coefficients in y of polys in x."""
    deg_y = max((j for (_, j, _) in terms), default=0)
    out: list[list[CycNum]] = [[] for _ in range(deg_y + 1)]
    for (i, j, _), v in terms.items():
        poly = out[j]
        while len(poly) <= i:
            poly.append(zero)
        poly[i] = poly[i] + v
    return [upoly.trim(p) for p in out]


def _quadratic_resultant(a: list, b: list) -> list:
    a = (a + [[], [], []])[:3]
    b = (b + [[], [], []])[:3]
    m, s = upoly.mul, upoly.sub
    t1 = s(m(a[2], b[0]), m(a[0], b[2]))
    t2 = s(m(a[2], b[1]), m(a[1], b[2]))
    t3 = s(m(a[1], b[0]), m(a[0], b[1]))
    return s(m(t1, t1), m(t2, t3))


def _eval_y_poly(p: list[list[CycNum]], x0: CycNum) -> list[CycNum]:
    return upoly.trim([upoly.evaluate(c, x0) if c else x0 * 0 for c in p])


def _singular_at_infinity(partials, zero: CycNum) -> list[ProjPoint]:
    """Common zeros of the partials on the line z = 0."""
    one = zero + 1
    out = []
    if all(not evaluate_terms(d, [zero, one, zero]) for d in partials):
        out.append(_pt(0, 1, 0))
    polys = []
    for d in partials:
        poly = [zero] * 3
        for (i, j, k), v in d.items():
            if k == 0:
                poly[j] = poly[j] + v
        polys.append(upoly.trim(poly))
    if all(not p for p in polys):
        raise ChartConstructionError("curve is singular along the line at infinity")
    g: list = []
    for p in polys:
        if p:
            g = upoly.gcd(g, p) if g else upoly.monic(p)
    sq = upoly.squarefree_part(g)
    if upoly.degree(sq) == 1:
        out.append(_pt(1, -sq[0], 0))
    elif upoly.degree(sq) > 1:
        raise ChartConstructionError("several singular points at infinity")
    return out


def evaluate_terms(terms: dict, coords) -> CycNum:
    acc = coords[0] * 0
    for (i, j, k), v in terms.items():
        acc = acc + v * coords[0] ** i * coords[1] ** j * coords[2] ** k
    return acc


def find_singular_point(c: Curve, seed: int = 0, attempts: int = 8) -> ProjPoint | None:
    """The unique singular point of an irreducible cubic, or None when it is smooth."""
    if c.degree != 3:
        raise ValueError("singular-point search is implemented for cubics")
    rng = random.Random(seed)
    order = c.order
    zero = CycNum.zero(order)
    for _ in range(attempts):
        while True:
            m = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
            if linalg.det(m):
                break
        mat = [[CycNum.rational(v, order) for v in row] for row in m]
        g = substitute(c, mat)  # singular points of g are M^-1 of those of c
        partials = [g.partial(v) for v in range(3)]
        found = _singular_at_infinity(partials, zero)
        ys = [_as_y_poly(d, zero) for d in partials]
        res = [
            _quadratic_resultant(ys[0], ys[1]),
            _quadratic_resultant(ys[0], ys[2]),
            _quadratic_resultant(ys[1], ys[2]),
        ]
        nonzero = [r for r in res if r]
        if not nonzero:
            raise ChartConstructionError("cubic is reducible or has a repeated component; list its components")
        gg: list = []
        for r in nonzero:
            gg = upoly.gcd(gg, r) if gg else upoly.monic(r)
        sq = upoly.squarefree_part(gg)
        if upoly.degree(sq) == 0:
            affine: list[ProjPoint] = []
        elif upoly.degree(sq) == 1:
            x0 = -sq[0]
            hs = [_eval_y_poly(p, x0) for p in ys]
            if all(not h for h in hs):
                raise ChartConstructionError("cubic is singular along a line")
            hg: list = []
            for h in hs:
                if h:
                    hg = upoly.gcd(hg, h) if hg else upoly.monic(h)
            hsq = upoly.squarefree_part(hg)
            if upoly.degree(hsq) != 1:
                continue
            affine = [_pt(x0, -hsq[0], 1)]
        else:
            continue
        pts = found + affine
        pts = [p for p in pts if not any(evaluate_terms(d, list(p.coords)) for d in partials)]
        if len(pts) > 1:
            raise ChartConstructionError("cubic has more than one singular point (reducible?)")
        if not pts:
            if upoly.degree(sq) == 0:
                return None
            continue
        q = ProjPoint(linalg.matvec(mat, pts[0].coords))
        if evaluate(c, q) or any(gradient(c, q)):  # pragma: no cover
            continue
        return q
    raise ChartConstructionError("could not locate the singular point in the working field")


# classification


def _distinct_lines(lines: list[ProjLine]) -> bool:
    return len(set(lines)) == len(lines)


def classify_cubic(c: Curve, seed: int = 0) -> CubicKind:
    if c.degree != 3:
        raise ValueError(f"expected a cubic, got degree {c.degree}")
    comps = c.component_list()
    if any(k != 1 for _, k in comps):
        raise ChartConstructionError("cubic with a repeated component has no group law")
    degs = sorted(comp.degree for comp, _ in comps)
    if degs == [1, 1, 1]:
        lines = [comp.as_line() for comp, _ in comps]
        if not _distinct_lines(lines):
            raise ChartConstructionError("repeated line component")
        return CubicKind.CONCURRENT_LINES if concurrent(lines) else CubicKind.THREE_LINES
    if degs == [1, 2]:
        conic = next(comp for comp, _ in comps if comp.degree == 2)
        line = next(comp for comp, _ in comps if comp.degree == 1).as_line()
        if conic_is_degenerate(conic):
            raise ChartConstructionError("conic component is degenerate; factor it into lines first")
        p, q = line.points()
        a0, a1, a2 = restrict_to_line(conic, p, q)
        if not a2:
            return CubicKind.CONIC_LINE_TANGENT if not a1 else CubicKind.CONIC_LINE_SECANT
        disc = a1 * a1 - a0 * a2 * 4
        return CubicKind.CONIC_LINE_TANGENT if not disc else CubicKind.CONIC_LINE_SECANT
    if degs == [3]:
        s = find_singular_point(c, seed)
        if s is None:
            return CubicKind.SMOOTH
        _, f2, _ = _singular_normal(c, s)
        a, b, cc = f2.get((2, 0), 0), f2.get((1, 1), 0), f2.get((0, 2), 0)
        return CubicKind.CUSPIDAL if not (as_cycnum(b) ** 2 - as_cycnum(a) * cc * 4) else CubicKind.NODAL
    raise ChartConstructionError(f"unsupported component degrees {degs}")


def _complete_basis(s: ProjPoint) -> list[list[CycNum]]:
    """A nonsingular matrix whose third column is s."""
    o = s.order
    units = [[CycNum.rational(int(i == j), o) for j in range(3)] for i in range(3)]
    for i in range(3):
        for j in range(i + 1, 3):
            cols = [units[i], units[j], list(s.coords)]
            if linalg.det(cols):
                return linalg.transpose(cols)
    raise DegenerateError("cannot complete a basis")  # pragma: no cover


def _singular_normal(c: Curve, s: ProjPoint):
    """Move s to [0:0:1]; return (matrix B with B e3 = s, quadratic part, cubic part)."""
    b = _complete_basis(s)
    g = substitute(c, b)
    if any(k >= 2 for (_, _, k) in g.coeffs):
        raise DomainError("point is not a singular point of the cubic")  # pragma: no cover
    return b, _binary_terms(g, 1), _binary_terms(g, 0)


# group map


def _multiplicative_check(values: list[CycNum]) -> bool:
    acc = values[0]
    for v in values[1:]:
        acc = acc * v
    return acc == 1


@dataclass
class _Chart:
    component: int
    label: str
    forward: Callable[[tuple[CycNum, CycNum, CycNum]], CycNum | None]
    backward: Callable[[CycNum], list[CycNum]]


class GroupMap:
    """Charts from the smooth part of a cubic to its group.

    ``transform`` sends the input cubic to normal position; charts act on
    normal coordinates. For smooth cubics the chord-tangent law is used
    directly on the input curve and ``identity_point`` is the chosen flex.
    """

    def __init__(self, cubic: Curve, kind: CubicKind, transform: ProjTransform,
                 charts: list[_Chart], normal: Curve | None = None,
                 identity_point: ProjPoint | None = None, note: str = ""):
        self.cubic = cubic
        self.kind = kind
        self.transform = transform
        self.charts = charts
        self.normal = normal
        self.identity_point = identity_point
        self.note = note
        self._components: dict[ProjPoint, int] = {}
        self._values: dict[ProjPoint, GroupElement] = {}

    @property
    def group(self) -> str:
        return self.kind.group

    def component_of(self, p: ProjPoint) -> int:
        if p in self._components:
            return self._components[p]
        mem = membership(self.cubic, p)
        if not mem.on_curve:
            raise DomainError(f"{p} is not on the cubic")
        if mem.component_index is None:
            raise DomainError(f"{p} is a singular point of the cubic")
        self._components[p] = mem.component_index
        return mem.component_index

    def rho(self, p: ProjPoint) -> GroupElement:
        if p in self._values:
            return self._values[p]
        elem = self._rho(p)
        self._values[p] = elem
        return elem

    def _rho(self, p: ProjPoint) -> GroupElement:
        idx = self.component_of(p)
        if self.kind is CubicKind.SMOOTH:
            return GroupElement(self.kind, p, idx)
        q = self.transform(p)
        chart = next(ch for ch in self.charts if ch.component == idx)
        v = chart.forward(q.coords)
        if v is None:
            raise DomainError(f"{p} lies outside the chart domain")
        return GroupElement(self.kind, v, idx)

    def point(self, value: CycNum | ProjPoint, component: int = 0) -> ProjPoint:
        """Inverse chart: the smooth point with the given group value."""
        if self.kind is CubicKind.SMOOTH:
            if not isinstance(value, ProjPoint):
                raise DomainError("chord-tangent values are points")
            return value
        chart = next(ch for ch in self.charts if ch.component == component)
        coords = chart.backward(as_cycnum(value))
        return self.transform.inverse()(ProjPoint(coords))

    # group operations

    def identity(self, component: int = 0) -> GroupElement:
        if self.kind is CubicKind.SMOOTH:
            return GroupElement(self.kind, self.identity_point, 0)
        o = self.transform.order
        v = CycNum.one(o) if self.group == "multiplicative" else CycNum.zero(o)
        return GroupElement(self.kind, v, component)

    def add(self, a: GroupElement, b: GroupElement) -> GroupElement:
        if self.kind is CubicKind.SMOOTH:
            return GroupElement(self.kind, chord_tangent_add(self.cubic, self.identity_point, a.value, b.value), 0)
        v = a.value * b.value if self.group == "multiplicative" else a.value + b.value
        return GroupElement(self.kind, v, a.component_index)

    def neg(self, a: GroupElement) -> GroupElement:
        if self.kind is CubicKind.SMOOTH:
            return GroupElement(self.kind, chord_tangent_neg(self.cubic, self.identity_point, a.value), 0)
        v = a.value.inverse() if self.group == "multiplicative" else -a.value
        return GroupElement(self.kind, v, a.component_index)

    def is_identity(self, a: GroupElement) -> bool:
        if self.kind is CubicKind.SMOOTH:
            return a.value == self.identity_point
        return a.value == (1 if self.group == "multiplicative" else 0)

    def sum_is_zero(self, elems: Sequence[GroupElement]) -> bool:
        acc = elems[0]
        for e in elems[1:]:
            acc = self.add(acc, e)
        return self.is_identity(acc)

    def describe(self) -> list[str]:
        lines = [f"kind: {self.kind.value}", f"group: {self.group}", f"cubic: {self.cubic}"]
        for i, (comp, k) in enumerate(self.cubic.component_list()):
            lines.append(f"component {i}: {comp}" + (f" (multiplicity {k})" if k != 1 else ""))
        if self.kind is CubicKind.SMOOTH:
            lines.append(f"identity: {self.identity_point}")
            lines.append("law: chord-tangent, three collinear points sum to the identity")
        else:
            lines.append("normalizing transform: " + self.transform.encode())
            if self.normal is not None:
                lines.append(f"normal form: {self.normal}")
            for ch in self.charts:
                lines.append(f"chart {ch.component}: {ch.label}")
        if self.note:
            lines.append(f"note: {self.note}")
        return lines


def _ratio(a: CycNum, b: CycNum) -> CycNum | None:
    if not a or not b:
        return None
    return a / b


def _div(a: CycNum, b: CycNum) -> CycNum | None:
    return a / b if b else None


def _three_lines_map(c: Curve, lines: list[ProjLine]) -> GroupMap:
    t = transform_mapping_lines(lines)
    one = CycNum.one(t.order)
    charts = [
        _Chart(0, "[0:y:z] -> y/z", lambda p: _ratio(p[1], p[2]), lambda v: [v * 0, v, one]),
        _Chart(1, "[x:0:z] -> -z/x", lambda p: _ratio(-p[2], p[0]), lambda v: [-one, v * 0, v]),
        _Chart(2, "[x:y:0] -> x/y", lambda p: _ratio(p[0], p[1]), lambda v: [v, one, v * 0]),
    ]
    return GroupMap(c, CubicKind.THREE_LINES, t, charts, Curve(3, {(1, 1, 1): 1}))


def _concurrent_lines_map(c: Curve, lines: list[ProjLine]) -> GroupMap:
    l1, l2, l3 = (lift_all(l.coords) for l in lines)
    vals = lift_all(l1 + l2 + l3)
    l1, l2, l3 = vals[0:3], vals[3:6], vals[6:9]
    coef = linalg.solve(linalg.transpose([l1, l2]), l3)
    if coef is None or not coef[0] or not coef[1]:
        raise DegenerateError("lines are not concurrent and distinct")  # pragma: no cover
    alpha, beta = coef
    centre = meet(lines[0], lines[1])
    k = next(i for i in range(3) if centre.coords[i])
    e = [CycNum.rational(1 if j == k else 0, alpha.order) for j in range(3)]
    t = ProjTransform([[alpha * x for x in l1], [-beta * x for x in l2], e])
    one = CycNum.one(t.order)
    charts = [
        _Chart(0, "[0:y:z] -> z/y", lambda p: _div(p[2], p[1]), lambda v: [v * 0, one, v]),
        _Chart(1, "[x:0:z] -> z/x", lambda p: _div(p[2], p[0]), lambda v: [one, v * 0, v]),
        _Chart(2, "[x:x:z] -> -z/x", lambda p: _div(-p[2], p[0]), lambda v: [one, one, -v]),
    ]
    normal = Curve(3, {(2, 1, 0): 1, (1, 2, 0): -1})
    return GroupMap(c, CubicKind.CONCURRENT_LINES, t, charts, normal)


_NORMAL_CONIC = Curve(2, {(2, 0, 0): -1, (0, 1, 1): 1})


def _conic_line_map(c: Curve, kind: CubicKind, hints: Sequence[ProjPoint]) -> GroupMap:
    comps = c.component_list()
    ci = next(i for i, (comp, _) in enumerate(comps) if comp.degree == 2)
    li = 1 - ci
    conic, line = comps[ci][0], comps[li][0].as_line()
    hits = _conic_meets_line(conic, line, hints)
    # already in normal position: keep the coordinates as they are
    in_normal = conic.proportional(_NORMAL_CONIC) and line == (
        ProjLine([1, 0, 0]) if kind is CubicKind.CONIC_LINE_SECANT else ProjLine([0, 0, 1]))
    smooth_hints = [h for h in hints if not evaluate(conic, h) and not line.contains(h)]
    one = None
    if kind is CubicKind.CONIC_LINE_SECANT:
        p1, p2 = hits
        pole = _pole(conic, line)
        q0 = smooth_hints[0] if smooth_hints else _conic_points(conic, p1, 1, [p2])[0]
        if in_normal:
            t = ProjTransform.identity(c.order)
        else:
            t = transform_mapping_points([pole, p1, p2, q0], [E1, E2, E3, UNIT])
        one = CycNum.one(t.order)
        charts = [
            _Chart(ci, "conic [tu:t^2:u^2] -> t/u = y/x",
                   lambda p: _ratio(p[1], p[0]), lambda v: [v, v * v, one]),
            _Chart(li, "line [0:y:z] -> -z/y",
                   lambda p: _ratio(-p[2], p[1]), lambda v: [v * 0, -one, v]),
        ]
        normal = Curve(3, {(3, 0, 0): -1, (1, 1, 1): 1})
    else:
        (p1,) = hits
        extra = [h for h in smooth_hints][:2]
        if len(extra) < 2:
            extra += _conic_points(conic, p1, 2 - len(extra), extra)
        q0, q1 = extra
        pole = meet(ProjLine(gradient(conic, p1)), ProjLine(gradient(conic, q0)))
        if in_normal:
            t = ProjTransform.identity(c.order)
        else:
            t = transform_mapping_points([pole, p1, q0, q1], [E1, E2, E3, UNIT])
        one = CycNum.one(t.order)
        charts = [
            _Chart(ci, "conic [t:t^2:1] -> x/z",
                   lambda p: _div(p[0], p[2]), lambda v: [v, v * v, one]),
            _Chart(li, "line [x:y:0] -> -y/x",
                   lambda p: _div(-p[1], p[0]), lambda v: [one, -v, v * 0]),
        ]
        normal = Curve(3, {(2, 0, 1): -1, (0, 1, 2): 1})
    return GroupMap(c, kind, t, charts, normal)


def _nodal_map(c: Curve, s: ProjPoint, hints: Sequence[ProjPoint], base_point: ProjPoint | None) -> GroupMap:
    b, f2, _ = _singular_normal(c, s)
    o = c.order
    q = lambda key: as_cycnum(f2.get(key, 0), o)
    a2, a1, a0 = q((2, 0)), q((1, 1)), q((0, 2))
    disc = a1 * a1 - a2 * a0 * 4
    root = nth_root(disc, 2)
    if root is None:
        raise ChartConstructionError("node tangents are not defined over the working field")
    # split f2 = a2 x^2 + a1 xy + a0 y^2 into two linear forms u1, u2 in (x, y)
    if a2:
        r1, r2 = (-a1 + root) / (a2 * 2), (-a1 - root) / (a2 * 2)
        u1, u2 = [CycNum.one(o), -r1], [CycNum.one(o), -r2]  # x - r y
    else:
        u1, u2 = [CycNum.zero(o), CycNum.one(o)], [a1, a0]  # y (a1 x + a0 y)
    half = Fraction(1, 2)
    # new x = (u2 - u1)/2, new y = (u1 + u2)/2 on the (x, y) of the moved frame
    nrow = [
        [(u2[0] - u1[0]) * half, (u2[1] - u1[1]) * half, CycNum.zero(o)],
        [(u1[0] + u2[0]) * half, (u1[1] + u2[1]) * half, CycNum.zero(o)],
        [CycNum.zero(o), CycNum.zero(o), CycNum.one(o)],
    ]
    step = ProjTransform(linalg.matmul(nrow, linalg.inverse3(b)))
    g = substitute(c, step.inverse().matrix)
    k = g.coefficient((0, 2, 1))
    if not k or g.coefficient((2, 0, 1)) != -k or g.coefficient((1, 1, 1)):
        raise AssertionError("nodal normalization failed")  # pragma: no cover
    scale = ProjTransform.diagonal(1, 1, k)
    t = scale @ step
    g = substitute(c, t.inverse().matrix)
    k2 = g.coefficient((0, 2, 1))
    f3 = {key: v / k2 for key, v in _binary_terms(g, 0).items()}
    normal = Curve(3, {**{(i, j, 0): v for (i, j), v in f3.items()}, (0, 2, 1): 1, (2, 0, 1): -1})

    def f3_at(x, y):
        acc = CycNum.zero(t.order)
        for (i, j), v in f3.items():
            acc = acc + v * x ** i * y ** j
        return acc

    one = CycNum.one(t.order)
    cval = f3_at(one, one) / f3_at(one, -one)

    def s_of(p):
        num, den = p[1] - p[0], p[1] + p[0]
        if not num or not den:
            return None
        return num / den

    kappa = None
    if base_point is not None:
        sv = s_of(t(base_point).coords)
        if sv is None or sv ** 3 != cval:
            raise ChartConstructionError("supplied base point is not an inflection of the nodal cubic")
        kappa = sv.inverse()
    else:
        for h in hints:
            if not evaluate(c, h) and h != s:
                sv = s_of(t(h).coords)
                if sv is not None and sv ** 3 == cval:
                    kappa = sv.inverse()
                    break
    if kappa is None:
        kappa = nth_root(cval.inverse(), 3)
    if kappa is None:
        raise ChartConstructionError("no inflection of the nodal cubic is defined over the working field")

    def fwd(p):
        sv = s_of(p)
        return None if sv is None else kappa * sv

    def back(v):
        sv = v / kappa
        x, y = one - sv, one + sv
        return [x * sv * 4, y * sv * 4, -f3_at(x, y)]

    chart = _Chart(0, f"[x:y:z] -> ({kappa}) * (y - x)/(y + x)", fwd, back)
    return GroupMap(c, CubicKind.NODAL, t, [chart], normal, note=f"node at {s}")


def _cuspidal_map(c: Curve, s: ProjPoint) -> GroupMap:
    b, f2, _ = _singular_normal(c, s)
    o = c.order
    q = lambda key: as_cycnum(f2.get(key, 0), o)
    a2, a1 = q((2, 0)), q((1, 1))
    zero, one = CycNum.zero(o), CycNum.one(o)
    # f2 = k * lin^2; pick lin and an independent companion form
    if a2:
        lin = [one, a1 / (a2 * 2)]
        other = [zero, one]
    else:
        lin = [zero, one]
        other = [one, zero]
    nrow = [[other[0], other[1], zero], [lin[0], lin[1], zero], [zero, zero, one]]
    t = ProjTransform(linalg.matmul(nrow, linalg.inverse3(b)))
    g = substitute(c, t.inverse().matrix)
    k = g.coefficient((0, 2, 1))
    if not k or g.coefficient((2, 0, 1)) or g.coefficient((1, 1, 1)):
        raise AssertionError("cuspidal normalization failed")  # pragma: no cover
    f3 = _binary_terms(g, 0)
    lead = as_cycnum(f3.get((3, 0), 0), o)
    if not lead:
        raise ChartConstructionError("cubic is reducible (cusp tangent is a component)")
    shift = as_cycnum(f3.get((2, 1), 0), o) / (lead * 3)

    def fwd(p):
        return None if not p[1] else p[0] / p[1] + shift

    def back(v):
        u = v - shift
        acc = CycNum.zero(u.order)
        for (i, j), w in f3.items():
            acc = acc + w * u ** i
        return [u, one, -acc / k]

    normal = Curve(3, {**{(i, j, 0): v for (i, j), v in f3.items()}, (0, 2, 1): k})
    chart = _Chart(0, f"[x:y:z] -> x/y + ({shift})", fwd, back)
    return GroupMap(c, CubicKind.CUSPIDAL, t, [chart], normal, note=f"cusp at {s}")


# chord-tangent law


def _dotv(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _check_on(c: Curve, p: ProjPoint) -> None:
    if evaluate(c, p):
        raise DomainError(f"{p} is not on the curve")


def third_point(c: Curve, p: ProjPoint, q: ProjPoint) -> ProjPoint:
    """Third intersection of the cubic with the line pq (tangent line when p = q)."""
    _check_on(c, p)
    _check_on(c, q)
    if p != q:
        a = _dotv(q.coords, gradient(c, p))
        b = _dotv(p.coords, gradient(c, q))
        if not a and not b:
            raise DomainError("the line through the points is a component of the curve")
        return ProjPoint([b * x - a * y for x, y in zip(p.coords, q.coords)])
    grad = gradient(c, p)
    if not any(grad):
        raise DomainError(f"{p} is singular")
    tl = ProjLine(grad)
    qq = _second_point(tl, p)
    fq = evaluate(c, qq)
    h = _dotv(p.coords, gradient(c, qq))
    if not fq and not h:
        raise DomainError("tangent line is a component of the curve")  # pragma: no cover
    return ProjPoint([fq * x - h * y for x, y in zip(p.coords, qq.coords)])


def chord_tangent_add(c: Curve, o: ProjPoint, p: ProjPoint, q: ProjPoint) -> ProjPoint:
    return third_point(c, o, third_point(c, p, q))


def chord_tangent_neg(c: Curve, o: ProjPoint, p: ProjPoint) -> ProjPoint:
    return third_point(c, p, o)


def is_inflection(c: Curve, p: ProjPoint) -> bool:
    if evaluate(c, p):
        return False
    grad = gradient(c, p)
    if not any(grad):
        return False
    qq = _second_point(ProjLine(grad), p)
    return not _dotv(p.coords, gradient(c, qq))


def _field_roots(poly: list[CycNum]) -> list[CycNum]:
    """Roots of the form (rational) * (root of unity) of a univariate polynomial."""
    poly = upoly.trim(poly)
    if upoly.degree(poly) < 1:
        return []
    out: list[CycNum] = []
    if poly[0].is_zero():
        out.append(poly[0])
    for u in roots_of_unity(poly[-1].order):
        sub = upoly.monic([cf * u ** i for i, cf in enumerate(poly)])
        if not all(cf.is_rational() for cf in sub):
            continue
        fr = [cf.to_fraction() for cf in sub]
        den = 1
        for x in fr:
            den = den * x.denominator // math.gcd(den, x.denominator)
        ints = [int(x * den) for x in fr]
        while ints and ints[0] == 0:
            ints.pop(0)
        if len(ints) < 2:
            continue
        for cand in _rational_candidates(ints[0], ints[-1]):
            if sum(Fraction(ci) * cand ** i for i, ci in enumerate(ints)) == 0:
                r = u * cand
                if r not in out:
                    out.append(r)
    return out


def _rational_candidates(const: int, lead: int) -> list[Fraction]:
    def divs(n):
        n = abs(n)
        return [d for d in range(1, n + 1) if n % d == 0] if n <= 10**6 else [1]

    out = set()
    for p in divs(const):
        for q in divs(lead):
            out.add(Fraction(p, q))
            out.add(Fraction(-p, q))
    return sorted(out)


def find_inflection(c: Curve, hints: Sequence[ProjPoint] = ()) -> ProjPoint | None:
    cands: list[ProjPoint] = list(hints) + [E1, E2, E3]
    for l in (ProjLine(1, 0, 0), ProjLine(0, 1, 0), ProjLine(0, 0, 1)):
        p, q = l.points()
        coeffs = restrict_to_line(c, p, q)
        for r in _field_roots(coeffs):
            cands.append(ProjPoint([x + y * r for x, y in zip(p.coords, q.coords)]))
        if not coeffs[-1]:
            cands.append(q)
    for p in cands:
        if is_inflection(c, p):
            return p
    return None


def build_group_map(c: Curve, hints: Sequence[ProjPoint] = (), base_point: ProjPoint | None = None,
                    seed: int = 0) -> GroupMap:
    """Choose charts for the cubic ``c`` according to its kind.

    ``hints`` are known points of the curve (for instance configuration points)
    used when an algebraic quantity is not available in the field.
    ``base_point`` fixes the identity for smooth cubics.
    """
    if c.degree != 3:
        raise ValueError(f"group maps exist only for cubics, got degree {c.degree}")
    kind = classify_cubic(c, seed)
    comps = c.component_list()
    if kind is CubicKind.THREE_LINES:
        return _three_lines_map(c, [comp.as_line() for comp, _ in comps])
    if kind is CubicKind.CONCURRENT_LINES:
        return _concurrent_lines_map(c, [comp.as_line() for comp, _ in comps])
    if kind in (CubicKind.CONIC_LINE_SECANT, CubicKind.CONIC_LINE_TANGENT):
        return _conic_line_map(c, kind, hints)
    if kind is CubicKind.SMOOTH:
        if base_point is not None:
            if not is_inflection(c, base_point):
                raise ChartConstructionError(f"{base_point} is not an inflection point")
            o = base_point
        else:
            o = find_inflection(c, hints)
        if o is None:
            raise ChartConstructionError("no inflection point found; pass one as base_point")
        return GroupMap(c, kind, ProjTransform.identity(c.order), [], identity_point=o)
    s = find_singular_point(c, seed)
    assert s is not None
    if kind is CubicKind.NODAL:
        return _nodal_map(c, s, hints, base_point)
    return _cuspidal_map(c, s)


def rho(m: GroupMap, p: ProjPoint) -> GroupElement:
    return m.rho(p)


def check_balance(m: GroupMap, pts: Sequence[ProjPoint]) -> list[int]:
    """Component indices of the points; raise unless each component of degree k holds k of them."""
    if len(set(pts)) != len(pts):
        raise ComponentBalanceError("points must be distinct")
    idx = [m.component_of(p) for p in pts]
    for j, (comp, _) in enumerate(m.cubic.component_list()):
        if idx.count(j) != comp.degree:
            raise ComponentBalanceError(
                f"component {j} has degree {comp.degree} but holds {idx.count(j)} of the points"
            )
    return idx


def group_sum_is_zero(m: GroupMap, p: ProjPoint, q: ProjPoint, r: ProjPoint) -> bool:
    try:
        check_balance(m, [p, q, r])
    except DomainError as exc:
        if isinstance(exc, ComponentBalanceError):
            raise
        raise ComponentBalanceError(str(exc)) from exc
    return m.sum_is_zero([m.rho(p), m.rho(q), m.rho(r)])


def balanced(m: GroupMap, pts: Sequence[ProjPoint]) -> bool:
    try:
        check_balance(m, pts)
        return True
    except DomainError:
        return False


__all__ = [
    "CubicKind",
    "GroupElement",
    "GroupMap",
    "balanced",
    "build_group_map",
    "chord_tangent_add",
    "chord_tangent_neg",
    "classify_cubic",
    "collinear",
    "find_inflection",
    "find_singular_point",
    "group_sum_is_zero",
    "is_inflection",
    "rho",
    "third_point",
]
