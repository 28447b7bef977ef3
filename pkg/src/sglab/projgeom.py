"""Points, lines and projective transformations of the plane over cyclotomic fields."""
from __future__ import annotations

from typing import Iterable, Sequence

from . import linalg
from .cycfield import CycNum, Scalar, as_cycnum, lift_all
from .errors import DegenerateError


def _canonical(coords: Sequence[Scalar]) -> tuple[CycNum, CycNum, CycNum]:
    vals = [as_cycnum(c) for c in coords]
    if len(vals) != 3:
        raise ValueError("homogeneous triples need exactly three coordinates")
    vals = lift_all(vals)
    for i, v in enumerate(vals):
        if v:
            if v == 1:
                return tuple(vals)  # type: ignore[return-value]
            inv = v.inverse()
            out = [c * inv if c else c for c in vals]
            out[i] = CycNum.one(v.order)
            return tuple(out)  # type: ignore[return-value]
    raise DegenerateError("the zero vector is not a projective point")


class _Triple:
    __slots__ = ("coords",)

    coords: tuple[CycNum, CycNum, CycNum]

    def __init__(self, *coords: Scalar):
        if len(coords) == 1 and not isinstance(coords[0], (CycNum, int)):
            coords = tuple(coords[0])  # type: ignore[assignment]
        object.__setattr__(self, "coords", _canonical(coords))

    def __setattr__(self, key, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def _from_canonical(cls, coords):
        obj = cls.__new__(cls)
        object.__setattr__(obj, "coords", tuple(coords))
        return obj

    @property
    def order(self) -> int:
        return self.coords[0].order

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i: int) -> CycNum:
        return self.coords[i]

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.coords))

    def sort_key(self) -> tuple:
        return tuple(c.sort_key()[1] for c in self.coords)

    def embed(self, m: int):
        return type(self)._from_canonical(c.embed(m) for c in self.coords)

    def encode(self) -> str:
        return "[" + " : ".join(c.encode() for c in self.coords) + "]"

    def __str__(self) -> str:
        return "[" + " : ".join(str(c) for c in self.coords) + "]"


class ProjPoint(_Triple):
    """A point [x : y : z] scaled so that its first nonzero coordinate is 1."""

    __slots__ = ()

    def __repr__(self) -> str:
        return f"ProjPoint{self}"


class ProjLine(_Triple):
    """The line ax + by + cz = 0, scaled like a point."""

    __slots__ = ()

    def __repr__(self) -> str:
        return f"ProjLine({', '.join(str(c) for c in self.coords)})"

    def contains(self, p: ProjPoint) -> bool:
        return not linalg.dot(self.coords, p.coords)

    def __contains__(self, p: ProjPoint) -> bool:
        return self.contains(p)

    def points(self) -> tuple[ProjPoint, ProjPoint]:
        """Two distinct points spanning the line."""
        a, b, c = self.coords
        o = a.order
        one, zero = CycNum.one(o), CycNum.zero(o)
        cands = [linalg.cross(self.coords, e) for e in ((one, zero, zero), (zero, one, zero), (zero, zero, one))]
        pts = []
        for v in cands:
            if any(v):
                p = ProjPoint(v)
                if p not in pts:
                    pts.append(p)
        return pts[0], pts[1]


COORDINATE_LINES = (ProjLine(1, 0, 0), ProjLine(0, 1, 0), ProjLine(0, 0, 1))


def collinear(p: ProjPoint, q: ProjPoint, r: ProjPoint) -> bool:
    """Exact determinant test; coincident points count as collinear."""
    return not linalg.det([p.coords, q.coords, r.coords])


def join(p: ProjPoint, q: ProjPoint) -> ProjLine:
    if p == q:
        raise DegenerateError(f"cannot join a point with itself: {p}")
    return ProjLine(linalg.cross(p.coords, q.coords))


def meet(l: ProjLine, m: ProjLine) -> ProjPoint:
    if l == m:
        raise DegenerateError("identical lines have no unique intersection")
    return ProjPoint(linalg.cross(l.coords, m.coords))


def concurrent(lines: Iterable[ProjLine]) -> bool:
    """True if all lines pass through one point (three or more distinct lines)."""
    lines = list(dict.fromkeys(lines))
    if len(lines) < 3:
        return True
    p = meet(lines[0], lines[1])
    return all(l.contains(p) for l in lines[2:])


class ProjTransform:
    """An invertible 3x3 matrix acting on column vectors of homogeneous coordinates."""

    __slots__ = ("matrix", "_inverse")

    def __init__(self, matrix: Sequence[Sequence[Scalar]]):
        flat = lift_all([as_cycnum(x) for row in matrix for x in row])
        m = tuple(tuple(flat[3 * i: 3 * i + 3]) for i in range(3))
        if not linalg.det(m):
            raise DegenerateError("projective transforms need a nonzero determinant")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "_inverse", None)

    def __setattr__(self, key, value):
        raise AttributeError("ProjTransform is immutable")

    @classmethod
    def identity(cls, order: int = 1) -> ProjTransform:
        return cls([[1 if i == j else 0 for j in range(3)] for i in range(3)]).embed(order)

    @classmethod
    def diagonal(cls, a: Scalar, b: Scalar, c: Scalar) -> ProjTransform:
        return cls([[a, 0, 0], [0, b, 0], [0, 0, c]])

    @property
    def order(self) -> int:
        return self.matrix[0][0].order

    def embed(self, m: int) -> ProjTransform:
        return ProjTransform([[x.embed(m) for x in row] for row in self.matrix])

    def inverse(self) -> ProjTransform:
        if self._inverse is None:
            inv = ProjTransform(linalg.inverse3(self.matrix))
            object.__setattr__(self, "_inverse", inv)
            object.__setattr__(inv, "_inverse", self)
        return self._inverse

    def __matmul__(self, other: ProjTransform) -> ProjTransform:
        """Composition: (self @ other)(p) == self(other(p))."""
        return ProjTransform(linalg.matmul(self.matrix, other.matrix))

    def __call__(self, p: ProjPoint) -> ProjPoint:
        return apply(self, p)

    def apply_line(self, l: ProjLine) -> ProjLine:
        # l . p = 0  <=>  (l M^-1) . (M p) = 0
        inv = self.inverse().matrix
        return ProjLine([linalg.dot(l.coords, [inv[0][j], inv[1][j], inv[2][j]]) for j in range(3)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjTransform):
            return NotImplemented
        return self.normalized().matrix == other.normalized().matrix

    def __hash__(self) -> int:
        return hash(self.normalized().matrix)

    def normalized(self) -> ProjTransform:
        """Same projective map, scaled so the first nonzero entry is 1."""
        flat = [x for row in self.matrix for x in row]
        lead = next(x for x in flat if x)
        inv = lead.inverse()
        return ProjTransform([[x * inv for x in row] for row in self.matrix])

    def encode(self) -> str:
        return "; ".join(" ".join(x.encode() for x in row) for row in self.matrix)

    def __repr__(self) -> str:
        return "ProjTransform(" + "; ".join(", ".join(str(x) for x in row) for row in self.matrix) + ")"


def apply(t: ProjTransform, p: ProjPoint) -> ProjPoint:
    return ProjPoint(linalg.matvec(t.matrix, p.coords))


def transform_mapping_lines(src: Sequence[ProjLine], dst: Sequence[ProjLine] = COORDINATE_LINES) -> ProjTransform:
    """A transform sending src[i] to dst[i].

    The residual diagonal freedom is fixed by sending the sum of the canonical
    coefficient vectors of ``src`` to the sum of those of ``dst``.
    """
    if len(src) != 3 or len(dst) != 3:
        raise ValueError("need exactly three source and three target lines")
    vals = lift_all([c for l in list(src) + list(dst) for c in l.coords])
    s = [vals[0:3], vals[3:6], vals[6:9]]
    d = [vals[9:12], vals[12:15], vals[15:18]]
    if not linalg.det(s):
        raise DegenerateError("source lines are concurrent")
    if not linalg.det(d):
        raise DegenerateError("target lines are concurrent")
    # as column vectors: S l_i = d_i with S = D L^-1, points move by M = S^-T = D^-T L^T.
    # D^-T has rows d_i^-T; written out, M = (D^T)^-1 L^T with L^T rows = src lines.
    dt = [list(r) for r in d]  # rows are d_i, i.e. D^T
    m = linalg.matmul(linalg.inverse3(dt), s)
    return ProjTransform(m)


def transform_mapping_points(src: Sequence[ProjPoint], dst: Sequence[ProjPoint]) -> ProjTransform:
    """The unique transform sending four points in general position to four others."""
    if len(src) != 4 or len(dst) != 4:
        raise ValueError("need four source and four target points")

    def frame(pts):
        cols = [list(p.coords) for p in pts[:3]]
        basis = linalg.transpose(cols)
        if not linalg.det(basis):
            raise DegenerateError("first three frame points are collinear")
        mu = linalg.solve(basis, list(pts[3].coords))
        if any(not x for x in mu):
            raise DegenerateError("frame points are not in general position")
        return [[basis[i][j] * mu[j] for j in range(3)] for i in range(3)]

    vals = lift_all([c for p in list(src) + list(dst) for c in p.coords])
    sp = [ProjPoint._from_canonical(vals[3 * i: 3 * i + 3]) for i in range(4)]
    dp = [ProjPoint._from_canonical(vals[12 + 3 * i: 15 + 3 * i]) for i in range(4)]
    fs, fd = frame(sp), frame(dp)
    return ProjTransform(linalg.matmul(fd, linalg.inverse3(fs)))
