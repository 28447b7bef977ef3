"""Sylvester-Gallai checks, collinear-triple counts and the structure classifier."""
from __future__ import annotations

import logging
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from . import linalg, upoly
from .addcomb import CosetCertificate, GridStats, grid_stats, recover_subgroup
from .cubicgroup import CubicKind, GroupMap, build_group_map, third_point
from .curves import Curve, Partition, assign_components, evaluate, factor_lines, fit_curve, restrict_to_line
from .cycfield import CycNum, lift_all, zeta
from .errors import DegenerateError, DomainError, SGLabError
from .projgeom import (
    ProjLine,
    ProjPoint,
    ProjTransform,
    collinear,
    concurrent,
    join,
    meet,
)

log = logging.getLogger(__name__)


@dataclass
class Configuration:
    """A finite set of distinct points over one cyclotomic field."""

    order: int
    points: list[ProjPoint]
    labels: list[str] | None = None

    def __post_init__(self):
        if not self.points:
            raise DegenerateError("a configuration needs at least one point")
        if self.labels is not None and len(self.labels) != len(self.points):
            raise ValueError("one label per point is required")
        if len(set(self.points)) != len(self.points):
            raise DegenerateError("configuration points must be distinct")

    @classmethod
    def from_points(cls, points: Iterable, labels: Sequence[str] | None = None, order: int | None = None) -> Configuration:
        """Lift coordinates to a common field and drop duplicates with a warning."""
        pts = [p if isinstance(p, ProjPoint) else ProjPoint(p) for p in points]
        if not pts:
            raise DegenerateError("a configuration needs at least one point")
        flat = [c for p in pts for c in p.coords]
        if order is not None:
            flat.append(CycNum.one(order))
        vals = lift_all(flat)
        o = vals[0].order
        lifted = [ProjPoint._from_canonical(vals[3 * i: 3 * i + 3]) for i in range(len(pts))]
        seen: dict[ProjPoint, int] = {}
        keep_labels: list[str] = []
        for i, p in enumerate(lifted):
            if p in seen:
                log.warning("dropping duplicate point %s (same as point %d)", p, seen[p] + 1)
                continue
            seen[p] = i
            if labels is not None:
                keep_labels.append(labels[i])
        return cls(o, list(seen), keep_labels if labels is not None else None)

    def __len__(self) -> int:
        return len(self.points)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"p{i + 1}"

    def transformed(self, t: ProjTransform) -> Configuration:
        return Configuration.from_points([t(p) for p in self.points], self.labels, self.order)

    def without(self, indices: Iterable[int]) -> Configuration:
        drop = set(indices)
        keep = [i for i in range(len(self.points)) if i not in drop]
        labels = [self.labels[i] for i in keep] if self.labels else None
        return Configuration(self.order, [self.points[i] for i in keep], labels)

    def point_set(self, order: int | None = None) -> set[ProjPoint]:
        o = order or self.order
        return {p.embed(o) for p in self.points}


def fermat_config(n: int) -> Configuration:
    """a_j = [0 : -w^j : 1], b_j = [-w^j : 0 : 1], c_j = [1 : -w^j : 0] for j = 1..n, w = zeta_n."""
    if n < 3:
        raise DegenerateError(f"the Fermat configuration needs n >= 3, got {n}")
    w = zeta(n)
    zero, one = CycNum.zero(n), CycNum.one(n)
    pts, labels = [], []
    for name in "abc":
        for j in range(1, n + 1):
            v = -(w**j)
            coords = {"a": (zero, v, one), "b": (v, zero, one), "c": (one, v, zero)}[name]
            pts.append(ProjPoint(coords))
            labels.append(f"{name}{j}")
    return Configuration(n, pts, labels)


def fermat_triple_count(n: int) -> int:
    """Ordered proper collinear triples of the Fermat configuration on 3n points."""
    return 3 * n * (n - 1) * (n - 2) + 6 * n * n


def random_transform(order: int, rng: random.Random, spread: int = 3) -> ProjTransform:
    """An invertible matrix with small entries in Z[zeta_order]."""
    w = zeta(order)
    powers = [w**k for k in range(max(1, min(order, 4)))]
    while True:
        rows = []
        for _ in range(3):
            row = []
            for _ in range(3):
                v = CycNum.zero(order)
                for p in powers:
                    v = v + p * rng.randint(-spread, spread)
                row.append(v)
            rows.append(row)
        if linalg.det(rows):
            return ProjTransform(rows)


# line index


class LineIncidenceIndex:
    """Every line spanned by two configuration points, with the sorted indices of its points."""

    def __init__(self, lines: dict[ProjLine, tuple[int, ...]], n: int):
        self.lines = lines
        self.n = n
        self._pair: dict[tuple[int, int], ProjLine] = {}
        for l, idx in lines.items():
            for i, j in combinations(idx, 2):
                self._pair[(i, j)] = l

    def line_through(self, i: int, j: int) -> ProjLine:
        return self._pair[(min(i, j), max(i, j))]

    def points_on(self, l: ProjLine) -> tuple[int, ...]:
        return self.lines.get(l, ())

    def ordinary_lines(self) -> list[ProjLine]:
        return [l for l, idx in self.lines.items() if len(idx) == 2]

    def histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(len(v) for v in self.lines.values()).items()))

    def triple_count(self) -> int:
        return sum(k * (k - 1) * (k - 2) for k in (len(v) for v in self.lines.values()))

    def rich_lines(self, min_size: int = 3) -> list[ProjLine]:
        """Lines with at least min_size points, largest first, ties in discovery order."""
        items = [(l, len(v)) for l, v in self.lines.items() if len(v) >= min_size]
        return [l for l, _ in sorted(items, key=lambda t: -t[1])]

    def __len__(self) -> int:
        return len(self.lines)


def build_index(config: Configuration | Sequence[ProjPoint]) -> LineIncidenceIndex:
    pts = list(config.points) if isinstance(config, Configuration) else list(config)
    n = len(pts)
    if n < 2:
        raise DegenerateError("an index needs at least two points")
    coords = [p.coords for p in pts]
    covered: set[tuple[int, int]] = set()
    lines: dict[ProjLine, tuple[int, ...]] = {}
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) in covered:
                continue
            raw = linalg.cross(coords[i], coords[j])
            on = [k for k in range(n) if k in (i, j) or not linalg.dot(raw, coords[k])]
            lines[ProjLine(raw)] = tuple(on)
            for a, b in combinations(on, 2):
                covered.add((a, b))
    return LineIncidenceIndex(lines, n)


def triple_count_naive(config: Configuration | Sequence[ProjPoint]) -> int:
    """Ordered proper collinear triples by direct determinant tests (the oracle)."""
    pts = list(config.points) if isinstance(config, Configuration) else list(config)
    n = len(pts)
    coords = [p.coords for p in pts]
    total = 0
    for i in range(n):
        for j in range(i + 1, n):
            cr = linalg.cross(coords[i], coords[j])
            for k in range(j + 1, n):
                if not linalg.dot(cr, coords[k]):
                    total += 1
    return 6 * total


@dataclass
class SGReport:
    is_sg: bool
    ordinary_lines: list[ProjLine]
    ordinary_count: int
    triple_count: int
    line_size_histogram: dict[int, int]
    collinear: bool = False


def sg_check(config: Configuration, limit: int | None = None, index: LineIncidenceIndex | None = None) -> SGReport:
    if len(config.points) < 3:
        raise DegenerateError("the Sylvester-Gallai check needs at least three points")
    idx = index or build_index(config)
    ordinary = idx.ordinary_lines()
    is_collinear = len(idx) == 1
    shown = ordinary if limit is None else ordinary[:limit]
    return SGReport(
        is_sg=not ordinary and not is_collinear,
        ordinary_lines=shown,
        ordinary_count=len(ordinary),
        triple_count=idx.triple_count(),
        line_size_histogram=idx.histogram(),
        collinear=is_collinear,
    )


def _as_sets(*groups: Iterable[int]) -> list[set[int]]:
    return [set(g) for g in groups]


def triples_between(a_i: Iterable[int], a_j: Iterable[int], a_k: Iterable[int], index: LineIncidenceIndex) -> int:
    """Ordered (x, y, z) of distinct collinear points with x in a_i, y in a_j, z in a_k.

    The sets hold point indices. Every proper collinear triple lies on exactly
    one index line, so the count is a sum over lines of an inclusion-exclusion
    term removing the tuples with a repeated point.
    """
    si, sj, sk = _as_sets(a_i, a_j, a_k)
    total = 0
    for pts in index.lines.values():
        on = set(pts)
        i, j, k = si & on, sj & on, sk & on
        if not i or not j or not k:
            continue
        total += (
            len(i) * len(j) * len(k)
            - len(i & j) * len(k)
            - len(i & k) * len(j)
            - len(j & k) * len(i)
            + 2 * len(i & j & k)
        )
    return total


def triples_between_naive(a_i: Iterable[int], a_j: Iterable[int], a_k: Iterable[int], points: Sequence[ProjPoint]) -> int:
    total = 0
    for x in a_i:
        for y in a_j:
            if y == x:
                continue
            for z in a_k:
                if z != x and z != y and collinear(points[x], points[y], points[z]):
                    total += 1
    return total


# concurrent families


@dataclass
class ConcurrentFamily:
    centre: ProjPoint
    lines: list[ProjLine]
    counts: list[int]  # points of the configuration on each line, centre excluded

    @property
    def hypothesis_holds(self) -> bool:
        m = len(self.lines)
        return max(self.counts) > m - 2


def _family_through(pts: Sequence[ProjPoint], centre: ProjPoint) -> ConcurrentFamily:
    groups: dict[ProjLine, int] = {}
    for p in pts:
        if p == centre:
            continue
        l = join(centre, p)
        groups[l] = groups.get(l, 0) + 1
    return ConcurrentFamily(centre, list(groups), list(groups.values()))


def concurrent_family(config: Configuration, lines: Sequence[ProjLine] | None = None,
                      index: LineIncidenceIndex | None = None, max_lines: int = 6) -> ConcurrentFamily | None:
    """The concurrent cover to test: the given lines, or one found from the richest index lines."""
    pts = config.points
    if lines is not None:
        lines = list(dict.fromkeys(lines))
        if len(lines) < 2 or not concurrent(lines):
            return None
        centre = meet(lines[0], lines[1])
        counts = [sum(1 for p in pts if p != centre and l.contains(p)) for l in lines]
        if sum(counts) != sum(1 for p in pts if p != centre):
            return None  # lines do not cover the configuration
        return ConcurrentFamily(centre, lines, counts)
    idx = index or build_index(config)
    rich = idx.rich_lines()[:max_lines]
    centres: list[ProjPoint] = []
    for l1, l2 in combinations(rich, 2):
        c = meet(l1, l2)
        if c not in centres:
            centres.append(c)
    for c in centres:
        fam = _family_through(pts, c)
        # a detected cover must consist of genuine lines of the configuration
        if min(fam.counts) >= 2 and fam.hypothesis_holds:
            return fam
    return None


def concurrent_lines_check(config: Configuration, lines: Sequence[ProjLine] | None = None,
                           index: LineIncidenceIndex | None = None) -> ProjLine | None:
    """An ordinary line when the configuration sits on m concurrent lines, one holding more than m - 2 points.

    Returns None when no such family applies. Under the hypothesis an
    ordinary line is guaranteed, and the index is searched exhaustively for it.
    """
    idx = index or build_index(config)
    if len(idx) == 1:
        raise DegenerateError("configuration is collinear")
    fam = concurrent_family(config, lines, idx)
    if fam is None or not fam.hypothesis_holds:
        return None
    ordinary = idx.ordinary_lines()
    return ordinary[0] if ordinary else None


# tangent counts


def _interpolate(xs: Sequence[int], ys: Sequence[CycNum]) -> list[CycNum]:
    o = lift_all(list(ys))[0].order
    rows = [[CycNum.rational(x**e, o) for e in range(len(xs))] for x in xs]
    sol = linalg.solve(rows, lift_all(list(ys)))
    assert sol is not None
    return upoly.trim(sol)


def _cubic_discriminant(a, b, c, d):
    m, s, sc = upoly.mul, upoly.sub, upoly.scale
    ab = m(a, b)
    t1 = m(m(b, b), m(c, c))
    t2 = sc(m(a, m(c, m(c, c))), 4)
    t3 = sc(m(m(b, m(b, b)), d), 4)
    t4 = sc(m(m(a, a), m(d, d)), 27)
    t5 = sc(m(ab, m(c, d)), 18)
    return upoly.add(s(s(s(t1, t2), t3), t4), t5)


def distinct_intersections(c: Curve, p: ProjPoint, q: ProjPoint) -> int:
    """Distinct points where the line pq meets c (p must be off c)."""
    coeffs = upoly.trim(restrict_to_line(c, p, q))
    if not coeffs:
        raise DomainError("line is a component of the curve")
    at_infinity = 1 if upoly.degree(coeffs) < c.degree else 0
    return upoly.distinct_root_count(coeffs) + at_infinity


def tangent_count(c: Curve, p: ProjPoint, sample: Sequence[ProjPoint] = ()) -> int:
    """Lines through p meeting the cubic in fewer than three distinct points.

    The pencil through p is parametrized by a second point q0 + l*q1 on a line
    missing p; the discriminant of the restricted binary cubic is a polynomial
    in l of degree <= 6 whose distinct roots are the deficient lines, and a
    drop in degree means the line through q1 is deficient too.
    """
    if c.degree != 3:
        raise ValueError("tangent_count expects a cubic")
    if not evaluate(c, p):
        raise DomainError(f"{p} lies on the curve")
    base = next(l for l in (ProjLine(1, 0, 0), ProjLine(0, 1, 0), ProjLine(0, 0, 1)) if not l.contains(p))
    q0, q1 = base.points()
    samples = []
    for lam in range(4):
        q = [x + y * lam for x, y in zip(q0.coords, q1.coords)]
        coeffs = restrict_to_line(c, p, q)
        samples.append(coeffs)
    # coefficient k (of t^k) is a polynomial of degree <= k in l
    polys = [_interpolate(range(4), [s[k] for s in samples]) for k in range(4)]
    disc = _cubic_discriminant(*polys)
    if not disc:
        raise DomainError("every line through the point is deficient (repeated component?)")
    count = upoly.distinct_root_count(disc) if upoly.degree(disc) > 0 else 0
    if upoly.degree(disc) < 6:
        count += 1
    for s in sample:
        if s == p:
            continue
        l = join(p, s)
        if distinct_intersections(c, p, s) < 3:
            x = meet(l, base)
            if x == q1:
                ok = upoly.degree(disc) < 6
            else:
                lam = _solve_pencil(x.coords, q0.coords, q1.coords)
                ok = not upoly.evaluate(disc, lam)
            if not ok:  # pragma: no cover - would mean the discriminant is wrong
                raise AssertionError(f"sampled deficient line through {s} missing from the count")
    return count


def _solve_pencil(x, q0, q1) -> CycNum:
    """lam with x proportional to q0 + lam q1."""
    # x = mu (q0 + lam q1): solve the 3x2 system for (mu, mu*lam)
    rows = [[q0[i], q1[i]] for i in range(3)]
    sol = linalg.solve(rows, list(x))
    if sol is None or not sol[0]:
        raise DomainError("point is not on the pencil base line")
    return sol[1] / sol[0]


# classifier


@dataclass
class ClassifierParams:
    d: int = 3
    delta: Fraction = Fraction(1, 5)
    epsilon: Fraction = Fraction(1, 20)
    significance: Fraction | None = None
    max_m: int | None = None
    seed: int = 0
    ransac_rounds: int = 200

    def __post_init__(self):
        self.delta = Fraction(self.delta)
        self.epsilon = Fraction(self.epsilon)
        if self.d < 2:
            raise ValueError(f"d must be at least 2, got {self.d}")
        if not (0 < self.epsilon <= self.delta < 1):
            raise ValueError(f"need 0 < epsilon <= delta < 1, got epsilon={self.epsilon}, delta={self.delta}")
        if self.significance is None:
            self.significance = self.delta / (100 * self.d)
        self.significance = Fraction(self.significance)

    def resolved_max_m(self, n: int) -> int:
        return self.max_m if self.max_m is not None else 2 * n


@dataclass
class StructureVerdict:
    outcome: str  # fermat-equivalent | ordinary-line | inconclusive
    stage: str
    reason: str = ""
    transform: ProjTransform | None = None
    m: int | None = None
    line: ProjLine | None = None
    curve: Curve | None = None
    kind: CubicKind | None = None
    partition: Partition | None = None
    dropped_components: list[int] = field(default_factory=list)
    singular_points: list[int] = field(default_factory=list)
    grid_reports: list[GridStats | None] = field(default_factory=list)
    certificates: list[CosetCertificate | None] = field(default_factory=list)
    stages: list[str] = field(default_factory=list)


def _greedy_line_cover(n: int, idx: LineIncidenceIndex, d: int, need: int) -> list[ProjLine] | None:
    covered: set[int] = set()
    chosen: list[ProjLine] = []
    candidates = idx.rich_lines()
    for _ in range(d):
        best, gain = None, 0
        for l in candidates:
            g = len(set(idx.points_on(l)) - covered)
            if g > gain:
                best, gain = l, g
        if best is None:
            break
        chosen.append(best)
        covered |= set(idx.points_on(best))
        if len(covered) >= need:
            return chosen
    return None


def _ransac_curve(pts: list[ProjPoint], deg: int, need: int, rng: random.Random, rounds: int) -> Curve | None:
    k = (deg + 1) * (deg + 2) // 2 - 1
    if len(pts) < k:
        return None
    best, score = None, -1
    for _ in range(rounds):
        subset = rng.sample(pts, k)
        c = fit_curve(subset, deg)
        if c is None:
            continue
        s = sum(1 for p in pts if not evaluate(c, p))
        if s > score:
            best, score = c, s
            if s == len(pts):
                break
    return best if score >= need else None


def find_curve(config: Configuration, params: ClassifierParams, idx: LineIncidenceIndex) -> Curve | None:
    """A curve of degree <= d through at least (1 - epsilon) n points, with line components split off."""
    pts = config.points
    n = len(pts)
    need = math.ceil(n * (1 - params.epsilon))
    cover = _greedy_line_cover(n, idx, params.d, need)
    if cover is not None:
        return Curve.product([(Curve.line(l), 1) for l in cover])
    rich = idx.rich_lines()
    for deg in range(1, params.d + 1):
        c = fit_curve(pts, deg)
        if c is not None:
            return factor_lines(c, rich)
    rng = random.Random(params.seed)
    for deg in range(2, params.d + 1):
        c = _ransac_curve(pts, deg, need, rng, params.ransac_rounds)
        if c is not None:
            return factor_lines(c, rich)
    return None


def _search_ordinary_through(point_index: int, idx: LineIncidenceIndex) -> ProjLine | None:
    for l, on in idx.lines.items():
        if len(on) == 2 and point_index in on:
            return l
    return None


def _tangent_family_search(config: Configuration, gm: GroupMap, partition: Partition,
                           idx: LineIncidenceIndex) -> ProjLine | None:
    """Lines through rho^-1(x) and rho^-1(-2x) with both points in A; ordinary ones are returned."""
    pts = config.points
    where = {p: i for i, p in enumerate(pts)}
    comps = gm.cubic.component_list()
    for j, part in enumerate(partition.parts):
        if comps[j][0].degree < 2:
            continue
        other = j
        if gm.kind in (CubicKind.CONIC_LINE_SECANT, CubicKind.CONIC_LINE_TANGENT):
            other = next(i for i, (c, _) in enumerate(comps) if c.degree == 1)
        for i in part:
            p = pts[i]
            try:
                if gm.kind is CubicKind.SMOOTH:
                    q = third_point(gm.cubic, p, p)
                else:
                    x = gm.rho(p)
                    target = gm.neg(gm.add(x, x))
                    q = gm.point(target.value, other)
            except SGLabError:
                continue
            k = where.get(q)
            if k is None or k == i:
                continue
            l = idx.line_through(i, k)
            if len(idx.points_on(l)) == 2:
                return l
    return None


def _canonicalize_three_lines(config: Configuration, gm: GroupMap, certs: list[CosetCertificate | None]) -> tuple[ProjTransform | None, int | None, str]:
    if any(c is None or c.sym_diff for c in certs):
        return None, None, "some component is not exactly a coset of roots of unity"
    ms = {c.m for c in certs}
    if len(ms) != 1:
        return None, None, f"components give different subgroup orders {sorted(ms)}"
    m = ms.pop()
    if m < 3:
        return None, None, f"subgroup order {m} is too small for a Fermat configuration"
    lam1, lam2, lam3 = (c.lam for c in certs)
    prod = lam1 * lam2 * lam3
    if prod**m != 1:
        return None, None, "coset representatives do not multiply into the subgroup"
    scale = ProjTransform.diagonal(lam2, -lam1.inverse(), 1)
    t = scale @ gm.transform
    target = fermat_config(m)
    image = [t(p) for p in config.points]
    vals = lift_all([c for p in image for c in p.coords] + [CycNum.one(m)])
    o = vals[0].order
    if {p.embed(o) for p in image} != target.point_set(o):
        return None, None, "normalized configuration differs from the Fermat configuration"
    return t, m, ""


def classify(config: Configuration, params: ClassifierParams | None = None) -> StructureVerdict:
    params = params or ClassifierParams()
    n = len(config.points)
    idx = build_index(config)
    report = sg_check(config, index=idx)
    stages = ["sg_check"]
    if not report.is_sg:
        if report.collinear:
            return StructureVerdict("inconclusive", "sg_check", "configuration is collinear", stages=stages)
        line = concurrent_lines_check(config, index=idx)
        if line is not None:
            stages.append("concurrent_lines_check")
            return StructureVerdict("ordinary-line", "concurrent_lines_check", line=line, stages=stages)
        return StructureVerdict("ordinary-line", "sg_check", line=report.ordinary_lines[0], stages=stages)

    stages.append("curve")
    curve = find_curve(config, params, idx)
    if curve is None:
        return StructureVerdict("inconclusive", "curve", f"no curve of degree <= {params.d} covers enough points",
                                stages=stages)
    verdict = StructureVerdict("inconclusive", "partition", curve=curve, stages=stages)
    stages.append("partition")
    part = assign_components(config, curve)
    verdict.partition = part
    threshold = params.significance * n
    comps = curve.component_list()
    verdict.dropped_components = [j for j, p in enumerate(part.parts) if len(p) < threshold]
    sig = [comps[j][0] for j in range(len(comps)) if j not in verdict.dropped_components]
    if sig and all(c.degree == 1 for c in sig) and len(sig) >= 3 and concurrent([c.as_line() for c in sig]):
        stages.append("concurrent_lines_check")
        line = concurrent_lines_check(config, [c.as_line() for c in sig], idx)
        if line is not None:
            verdict.outcome, verdict.stage, verdict.line = "ordinary-line", "concurrent_lines_check", line
            return verdict
    if curve.degree != 3:
        verdict.stage = "group"
        verdict.reason = f"fitted curve has degree {curve.degree}, not a cubic"
        return verdict

    stages.append("singular")
    verdict.singular_points = [i for i in part.errors if not evaluate(curve, config.points[i])]
    for i in verdict.singular_points:
        line = _search_ordinary_through(i, idx)
        if line is not None:
            verdict.outcome, verdict.stage, verdict.line = "ordinary-line", "singular", line
            return verdict

    stages.append("group")
    try:
        gm = build_group_map(curve, hints=config.points, seed=params.seed)
    except SGLabError as exc:
        verdict.stage, verdict.reason = "group", f"no group chart: {exc}"
        return verdict
    verdict.kind = gm.kind
    max_m = params.resolved_max_m(n)
    if gm.group != "chord-tangent":
        for j, idxs in enumerate(part.parts):
            vals = [gm.rho(config.points[i]).value for i in idxs]
            if not vals:
                verdict.grid_reports.append(None)
                verdict.certificates.append(None)
                continue
            verdict.grid_reports.append(grid_stats(vals, gm.group))
            verdict.certificates.append(recover_subgroup(vals, max_m) if gm.group == "multiplicative" else None)

    if gm.kind is CubicKind.THREE_LINES:
        stages.append("canonicalize")
        if part.errors:
            verdict.stage = "canonicalize"
            verdict.reason = f"{len(part.errors)} points are off the smooth part of the cubic"
            return verdict
        t, m, why = _canonicalize_three_lines(config, gm, verdict.certificates)
        if t is None:
            verdict.stage, verdict.reason = "canonicalize", why
            return verdict
        verdict.outcome, verdict.stage, verdict.transform, verdict.m = "fermat-equivalent", "canonicalize", t, m
        return verdict

    stages.append("tangent_family")
    line = _tangent_family_search(config, gm, part, idx)
    if line is not None:
        verdict.outcome, verdict.stage, verdict.line = "ordinary-line", "tangent_family", line
        return verdict
    verdict.stage = "tangent_family"
    verdict.reason = f"{gm.kind.value} cubic: no ordinary line in the tangent family and no Fermat structure"
    return verdict
