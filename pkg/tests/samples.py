"""Cubic curves of every kind plus point samplers shared by the test modules."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from sglab.cubicgroup import CubicKind, GroupMap, build_group_map, chord_tangent_add, chord_tangent_neg
from sglab.curves import Curve, transform_curve
from sglab.cycfield import CycNum, zeta
from sglab.projgeom import ProjLine, ProjPoint, ProjTransform


def line(a, b, c) -> Curve:
    return Curve.line(ProjLine([a, b, c]))


def cubic(terms: dict) -> Curve:
    return Curve(3, terms)


CONIC = Curve(2, {(2, 0, 0): -1, (0, 1, 1): 1})  # yz - x^2

NORMAL_FORMS: dict[CubicKind, Curve] = {
    CubicKind.THREE_LINES: Curve.product([(line(1, 0, 0), 1), (line(0, 1, 0), 1), (line(0, 0, 1), 1)]),
    CubicKind.CONCURRENT_LINES: Curve.product([(line(1, 0, 0), 1), (line(0, 1, 0), 1), (line(1, -1, 0), 1)]),
    CubicKind.CONIC_LINE_SECANT: Curve.product([(CONIC, 1), (line(1, 0, 0), 1)]),
    CubicKind.CONIC_LINE_TANGENT: Curve.product([(CONIC, 1), (line(0, 0, 1), 1)]),
    # y^2 z = x^3 + x^2 z, node at [0:0:1]
    CubicKind.NODAL: cubic({(0, 2, 1): 1, (3, 0, 0): -1, (2, 0, 1): -1}),
    # y^2 z = x^3, cusp at [0:0:1]
    CubicKind.CUSPIDAL: cubic({(0, 2, 1): 1, (3, 0, 0): -1}),
    # y^2 z = x^3 - x z^2
    CubicKind.SMOOTH: cubic({(0, 2, 1): 1, (3, 0, 0): -1, (1, 0, 2): 1}),
}

# y^2 z = x^3 + 17 z^3 with two independent rational points
MORDELL_17 = cubic({(0, 2, 1): 1, (3, 0, 0): -1, (0, 0, 3): -17})
MORDELL_17_GENERATORS = (ProjPoint([-2, 3, 1]), ProjPoint([-1, 4, 1]))

INFINITY = ProjPoint([0, 1, 0])


def moved(c: Curve, seed: int) -> tuple[Curve, ProjTransform]:
    """A rational projective image of c."""
    rng = random.Random(seed)
    while True:
        m = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
        try:
            t = ProjTransform(m)
        except Exception:
            continue
        return transform_curve(c, t), t


def multiplicative_values(count: int) -> list[CycNum]:
    """+-2^k for growing k: many triples with product 1."""
    out = []
    for k in itertools.count():
        for v in (Fraction(2) ** k, -Fraction(2) ** k, Fraction(2) ** -k, -Fraction(2) ** -k):
            c = CycNum.rational(v)
            if c not in out:
                out.append(c)
            if len(out) == count:
                return out
    raise AssertionError


def additive_values(count: int) -> list[CycNum]:
    """0, 1, -1, 2, -2, ...: many triples summing to 0."""
    return [CycNum.rational((k + 1) // 2 * (1 if k % 2 else -1)) for k in range(count)]


def balanced_triples(gm: GroupMap, pts: list[ProjPoint]):
    """Every unordered triple of distinct points meeting each component in its degree."""
    by_comp: dict[int, list[ProjPoint]] = {}
    for p in pts:
        by_comp.setdefault(gm.component_of(p), []).append(p)
    degrees = [comp.degree for comp, _ in gm.cubic.component_list()]
    pools = [itertools.combinations(by_comp.get(j, []), d) for j, d in enumerate(degrees)]
    for combo in itertools.product(*[list(p) for p in pools]):
        yield tuple(q for part in combo for q in part)


def chart_samples(gm: GroupMap, per_component: int) -> list[ProjPoint]:
    """Smooth points of every component obtained through the inverse charts."""
    pts: list[ProjPoint] = []
    vals = multiplicative_values if gm.group == "multiplicative" else additive_values
    for j, _ in enumerate(gm.cubic.component_list()):
        got = 0
        for v in vals(3 * per_component):
            try:
                p = gm.point(v, j)
            except Exception:
                continue
            try:
                if gm.component_of(p) != j:
                    continue
                gm.rho(p)
            except Exception:
                continue
            if p not in pts:
                pts.append(p)
                got += 1
            if got == per_component:
                break
    return pts


def lattice_points(c: Curve, o: ProjPoint, gens: tuple[ProjPoint, ProjPoint], count: int) -> list[ProjPoint]:
    """Points i*P + j*Q for small |i|, |j| ordered by height of the index."""
    p, q = gens
    neg_p = chord_tangent_neg(c, o, p)
    neg_q = chord_tangent_neg(c, o, q)
    out: list[ProjPoint] = []
    span = 1
    while len(out) < count:
        for i in range(-span, span + 1):
            for j in range(-span, span + 1):
                if max(abs(i), abs(j)) != span:
                    continue
                r = o
                for _ in range(abs(i)):
                    r = chord_tangent_add(c, o, r, p if i > 0 else neg_p)
                for _ in range(abs(j)):
                    r = chord_tangent_add(c, o, r, q if j > 0 else neg_q)
                if r != o and r not in out:
                    out.append(r)
        span += 1
    return out[:count]


def congruent_number_points() -> tuple[ProjPoint, ...]:
    """A point of infinite order on y^2 z = x^3 - x z^2 over Q(zeta_5) plus the 2-torsion."""
    w = zeta(5)
    sqrt5 = 2 * (w + w**4) + 1
    p = ProjPoint([Fraction(-4, 5), Fraction(6, 25) * sqrt5, 1])
    torsion = (ProjPoint([0, 0, 1]), ProjPoint([1, 0, 1]), ProjPoint([-1, 0, 1]))
    return (p,) + torsion


def group_map(kind: CubicKind, seed: int | None = None) -> GroupMap:
    """Group map of the normal form, or of a random rational image when ``seed`` is given."""
    c = NORMAL_FORMS[kind]
    if seed is not None:
        c, _ = moved(c, seed)
    return build_group_map(c)


def smooth_samples(count: int) -> list[tuple[Curve, ProjPoint, list[ProjPoint]]]:
    """Two smooth cubics with their identity flex and ``count`` points each."""
    out = []
    c = NORMAL_FORMS[CubicKind.SMOOTH]
    p, *torsion = congruent_number_points()
    pts = list(torsion)
    multiples = [INFINITY]
    k = 0
    while len(pts) < count:
        k += 1
        multiples.append(chord_tangent_add(c, INFINITY, multiples[-1], p))
        for base in (multiples[-1], chord_tangent_neg(c, INFINITY, multiples[-1])):
            pts.append(base)
            pts.extend(chord_tangent_add(c, INFINITY, base, t) for t in torsion)
    out.append((c, INFINITY, pts[:count]))
    out.append((MORDELL_17, INFINITY, lattice_points(MORDELL_17, INFINITY, MORDELL_17_GENERATORS, count)))
    return out
