"""Finite-set combinatorics in the chart groups: difference sets, grids, near-subgroups, Mobius maps."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .cycfield import CycNum, Scalar, as_cycnum, lift_all, multiplicative_order
from .errors import DomainError, KindMismatchError

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"


def _unpack(q: Iterable, kind: str | None) -> tuple[list[CycNum], str]:
    """Raw scalars and the group kind from GroupElements or plain values."""
    items = list(q)
    kinds = set()
    vals = []
    for x in items:
        if hasattr(x, "value") and hasattr(x, "kind"):
            kinds.add(x.kind.group)
            vals.append(x.value)
        else:
            vals.append(as_cycnum(x))
    if kind is not None:
        kinds.add(kind)
    if len(kinds) > 1:
        raise KindMismatchError(f"elements of different kinds: {sorted(kinds)}")
    if not kinds:
        raise ValueError("group kind is required for raw values")
    k = kinds.pop()
    if k not in (ADDITIVE, MULTIPLICATIVE):
        raise KindMismatchError(f"difference sets are defined for additive or multiplicative charts, not {k}")
    if any(not isinstance(v, CycNum) for v in vals):
        raise KindMismatchError("values must be scalars")
    return (lift_all(vals) if vals else []), k


def difference_set(q: Iterable, kind: str | None = None) -> set[CycNum]:
    """Q - Q, or the ratio set Q : Q in the multiplicative case."""
    vals, k = _unpack(q, kind)
    vals = list(dict.fromkeys(vals))
    if k == MULTIPLICATIVE:
        if any(not v for v in vals):
            raise DomainError("zero is not in the multiplicative group")
        invs = [v.inverse() for v in vals]
        return {a * b for a in vals for b in invs}
    return {a - b for a in vals for b in vals}


@dataclass(frozen=True)
class GridStats:
    set_size: int
    diff_or_ratio_size: int
    doubling_constant: Fraction
    group_kind: str


def grid_stats(q: Iterable, kind: str | None = None) -> GridStats:
    vals, k = _unpack(q, kind)
    vals = list(dict.fromkeys(vals))
    if not vals:
        raise ValueError("grid statistics need a nonempty set")
    d = difference_set(vals, k)
    return GridStats(len(vals), len(d), Fraction(len(d), len(vals)), k)


def grid_constant(q: Iterable, c: Scalar, kind: str | None = None) -> tuple[bool, GridStats]:
    """Whether |Q - Q| <= c |Q|, with the measured statistics."""
    stats = grid_stats(q, kind)
    return stats.diff_or_ratio_size <= Fraction(c) * stats.set_size, stats


def subset_grid_constant(q: Iterable, sub: Iterable, c: Scalar, kind: str | None = None) -> tuple[Fraction, bool]:
    """The inherited constant c|Q|/|Q'| of a subset and whether the subset meets it."""
    full, k = _unpack(q, kind)
    part, _ = _unpack(sub, k)
    full, part = set(full), set(part)
    if not part or not part <= full:
        raise ValueError("need a nonempty subset")
    inherited = Fraction(c) * len(full) / len(part)
    return inherited, len(difference_set(part, k)) <= inherited * len(part)


# near-subgroups of roots of unity


@dataclass(frozen=True)
class CosetCertificate:
    m: int
    lam: CycNum
    sym_diff: int

    def coset(self) -> set[CycNum]:
        """The set lambda * H_m when H_m lies in the working field."""
        from .cycfield import roots_of_unity_count, zeta

        o = self.lam.order
        if roots_of_unity_count(o) % self.m:
            big = o * self.m // math.gcd(o, self.m)
            lam = self.lam.embed(big)
        else:
            lam = self.lam
        w = zeta(self.m)
        return {lam * w**k for k in range(self.m)}


def recover_subgroup(a: Iterable[Scalar], max_m: int) -> CosetCertificate | None:
    """Best fit of A by a coset lambda * H_m with lambda in A and m <= max_m.

    |A n lambda H_m| is the number of a in A with (a / lambda)^m = 1, so the
    symmetric difference is |A| + m - 2 * that count.
    """
    vals = list(dict.fromkeys(lift_all([as_cycnum(x) for x in a])))
    if not vals:
        raise ValueError("recover_subgroup needs a nonempty set")
    if max_m < 1:
        raise ValueError("max_m must be positive")
    if any(not v for v in vals):
        raise DomainError("zero is not in the multiplicative group")
    n = len(vals)
    best: tuple | None = None
    # ties: smaller m, then lambda = 1, then coefficient-vector order
    for lam in sorted(vals, key=lambda v: (v != 1, v.sort_key())):
        inv = lam.inverse()
        orders = [multiplicative_order(v * inv) for v in vals]
        counts = defaultdict(int)
        for o in orders:
            if o is not None:
                counts[o] += 1
        for m in range(1, max_m + 1):
            inside = sum(c for o, c in counts.items() if m % o == 0)
            sd = n + m - 2 * inside
            key = (sd, m)
            if best is None or key < best[0]:
                best = (key, lam)
    assert best is not None
    (sd, m), lam = best
    if sd > n:
        return None
    return CosetCertificate(m, lam, sd)


# Mobius maps


@dataclass(frozen=True)
class MobiusMap:
    a: CycNum
    b: CycNum
    c: CycNum
    d: CycNum

    def __init__(self, a: Scalar, b: Scalar, c: Scalar, d: Scalar):
        vals = lift_all([as_cycnum(v) for v in (a, b, c, d)])
        if not (vals[0] * vals[3] - vals[1] * vals[2]):
            raise DomainError("Mobius map needs ad - bc != 0")
        for name, v in zip("abcd", vals):
            object.__setattr__(self, name, v)

    @classmethod
    def identity(cls) -> MobiusMap:
        return cls(1, 0, 0, 1)

    def __call__(self, x: Scalar) -> CycNum | None:
        """Image of x, or None where the denominator vanishes."""
        x = as_cycnum(x)
        den = self.c * x + self.d
        if not den:
            return None
        return (self.a * x + self.b) / den

    def compose(self, other: MobiusMap) -> MobiusMap:
        """self after other."""
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> MobiusMap:
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def encode(self) -> str:
        return " ".join(v.encode() for v in (self.a, self.b, self.c, self.d))


def mobius_incidences_naive(pairs: Iterable[tuple[Scalar, Scalar]], maps: Iterable[MobiusMap]) -> int:
    pairs = [(as_cycnum(x), as_cycnum(y)) for x, y in pairs]
    total = 0
    for psi in maps:
        for x, y in pairs:
            v = psi(x)
            if v is not None and v == y:
                total += 1
    return total


def mobius_incidences(pairs: Iterable[tuple[Scalar, Scalar]], maps: Iterable[MobiusMap]) -> int:
    """Number of (pair, map) with y = psi(x); evaluates each map once per distinct abscissa."""
    pairs = [(as_cycnum(x), as_cycnum(y)) for x, y in pairs]
    maps = list(maps)
    if not pairs or not maps:
        return 0
    flat = lift_all([v for pr in pairs for v in pr] + [v for f in maps for v in (f.a, f.b, f.c, f.d)])
    k = 2 * len(pairs)
    pairs = [(flat[2 * i], flat[2 * i + 1]) for i in range(len(pairs))]
    by_x: dict[CycNum, dict[CycNum, int]] = defaultdict(lambda: defaultdict(int))
    for x, y in pairs:
        by_x[x][y] += 1
    total = 0
    for j in range(len(maps)):
        a, b, c, d = flat[k + 4 * j: k + 4 * j + 4]
        for x, ys in by_x.items():
            den = c * x + d
            if den:
                total += ys.get((a * x + b) / den, 0)
    return total


# expansion


@dataclass
class ExpansionReport:
    mode: str
    set_size: int
    first_label: str
    first_size: int
    second_label: str
    second_size: int
    excluded: int = 0
    exponent: Fraction = Fraction(41, 40)
    notes: list[str] = field(default_factory=list)

    @property
    def maximum(self) -> int:
        return max(self.first_size, self.second_size)

    @property
    def normalized(self) -> float:
        """max / |A|^(1 + 1/40); a measurement only."""
        return self.maximum / (self.set_size ** float(self.exponent)) if self.set_size else 0.0


MODES = ("two-pt", "one-pt", "mixed")


def expansion_report(a: Iterable[Scalar], psi: MobiusMap, mode: str = "two-pt", restrict: bool = False) -> ExpansionReport:
    """Sizes of the sets named by ``mode`` for A and psi(A).

    two-pt: A:A and psi(A):psi(A); one-pt: A-A and psi(A)-psi(A);
    mixed: A-A and psi(A):psi(A). Points of A that are zero, poles of psi or
    zeros of psi are a domain error unless ``restrict`` drops them.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    vals = list(dict.fromkeys(lift_all([as_cycnum(x) for x in a])))
    keep, images = [], []
    for x in vals:
        y = psi(x) if x else None
        if not x or y is None or not y:
            if not restrict:
                raise DomainError(f"{x} is zero or maps to 0 or infinity under psi")
            continue
        keep.append(x)
        images.append(y)
    excluded = len(vals) - len(keep)
    if mode == "two-pt":
        first = ("A:A", len(difference_set(keep, MULTIPLICATIVE)))
        second = ("psi(A):psi(A)", len(difference_set(images, MULTIPLICATIVE)))
    elif mode == "one-pt":
        first = ("A-A", len(difference_set(keep, ADDITIVE)))
        second = ("psi(A)-psi(A)", len(difference_set(images, ADDITIVE)))
    else:
        first = ("A-A", len(difference_set(keep, ADDITIVE)))
        second = ("psi(A):psi(A)", len(difference_set(images, MULTIPLICATIVE)))
    return ExpansionReport(mode, len(keep), first[0], first[1], second[0], second[1], excluded)
