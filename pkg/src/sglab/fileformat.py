"""Line-oriented text format for configurations, curves and scalar data.

Example::

    format: sg-config/1
    order: 3
    point: [0 : 3:[0,-1] : 1]
    label: a1
    curve: 3
    component: 1 1
    term: 1,0,0: 1

Scalars are rationals (``-3/4``) or ``N:[c0,c1,...]`` coefficient vectors in
the power basis of zeta_N. ``#`` starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .addcomb import MobiusMap
from .curves import Curve
from .cycfield import CycNum, parse_cycnum
from .errors import FormatError
from .projgeom import ProjPoint

FORMAT_VERSION = "sg-config/1"
KEYS = ("format", "order", "point", "label", "curve", "component", "term", "value", "pair", "map")


@dataclass
class ConfigFile:
    order: int = 1
    points: list[ProjPoint] = field(default_factory=list)
    labels: list[str | None] = field(default_factory=list)
    curve: Curve | None = None
    values: list[CycNum] = field(default_factory=list)
    pairs: list[tuple[CycNum, CycNum]] = field(default_factory=list)
    maps: list[MobiusMap] = field(default_factory=list)

    def point_labels(self) -> list[str] | None:
        if not any(self.labels):
            return None
        return [lab if lab else f"p{i + 1}" for i, lab in enumerate(self.labels)]

    def configuration(self):
        from .sgcore import Configuration

        if not self.points:
            raise FormatError("file contains no points")
        return Configuration.from_points(self.points, self.point_labels(), self.order)


def format_scalar(v: CycNum) -> str:
    if v.is_rational():
        f = v.to_fraction()
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return v.encode()


def format_point(p: ProjPoint) -> str:
    return "[" + " : ".join(format_scalar(c) for c in p.coords) + "]"


def parse_scalar(text: str, order: int, line: int | None = None, column: int | None = None) -> CycNum:
    text = text.strip()
    try:
        if ":" in text:
            v = parse_cycnum(text)
        else:
            v = CycNum.rational(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad scalar {text!r}: {exc}", line, column) from None
    if order % v.order == 0 and v.order != order:
        v = v.embed(order)
    return v


_TOKEN = re.compile(r"\S+")


def _tokens(text: str, offset: int) -> list[tuple[str, int]]:
    return [(m.group(0), offset + m.start() + 1) for m in _TOKEN.finditer(text)]


def _parse_point(body: str, order: int, line: int, col: int) -> ProjPoint:
    s = body.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise FormatError("points are written [x : y : z]", line, col)
    inner = s[1:-1]
    parts = re.split(r"\s+:\s+", inner.strip())
    if len(parts) != 3 and "[" not in inner:
        parts = inner.split(":")
    if len(parts) != 3:
        raise FormatError("a point needs exactly three coordinates separated by ' : '", line, col)
    coords = [parse_scalar(p, order, line, col) for p in parts]
    try:
        return ProjPoint(coords)
    except Exception as exc:
        raise FormatError(str(exc), line, col) from None


def parse(text: str) -> ConfigFile:
    cf = ConfigFile()
    seen_header = False
    curve_deg: int | None = None
    curve_terms: dict = {}
    comps: list[list] = []  # [degree, multiplicity, terms]
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        if not content.strip():
            continue
        m = re.match(r"\s*([A-Za-z_][\w-]*)\s*:", content)
        if not m:
            raise FormatError("expected 'key: value'", lineno, 1)
        key = m.group(1)
        kcol = m.start(1) + 1
        body = content[m.end():]
        bcol = m.end() + 1
        if not seen_header:
            if key != "format":
                raise FormatError(f"first entry must be 'format: {FORMAT_VERSION}'", lineno, kcol)
            if body.strip() != FORMAT_VERSION:
                raise FormatError(
                    f"unsupported format {body.strip()!r}; this reader handles {FORMAT_VERSION}", lineno, bcol
                )
            seen_header = True
            continue
        if key not in KEYS:
            raise FormatError(f"unknown key {key!r} in {FORMAT_VERSION}", lineno, kcol)
        toks = _tokens(body, m.end())
        if key == "format":
            raise FormatError("duplicate format header", lineno, kcol)
        elif key == "order":
            if len(toks) != 1 or not toks[0][0].isdigit() or int(toks[0][0]) < 1:
                raise FormatError("order must be a positive integer", lineno, bcol)
            cf.order = int(toks[0][0])
        elif key == "point":
            cf.points.append(_parse_point(body, cf.order, lineno, bcol))
            cf.labels.append(None)
        elif key == "label":
            if not cf.points:
                raise FormatError("label must follow a point", lineno, kcol)
            cf.labels[-1] = body.strip()
        elif key == "curve":
            if len(toks) != 1 or not toks[0][0].isdigit():
                raise FormatError("curve takes its degree", lineno, bcol)
            if curve_deg is not None:
                raise FormatError("only one curve per file", lineno, kcol)
            curve_deg = int(toks[0][0])
        elif key == "component":
            if curve_deg is None:
                raise FormatError("component outside a curve block", lineno, kcol)
            if len(toks) != 2 or not all(t.isdigit() for t, _ in toks):
                raise FormatError("component takes '<degree> <multiplicity>'", lineno, bcol)
            comps.append([int(toks[0][0]), int(toks[1][0]), {}])
        elif key == "term":
            if curve_deg is None:
                raise FormatError("term outside a curve block", lineno, kcol)
            tm = re.match(r"\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*:(.*)$", body)
            if not tm:
                raise FormatError("term is written 'i,j,k: <scalar>'", lineno, bcol)
            mono = (int(tm.group(1)), int(tm.group(2)), int(tm.group(3)))
            val = parse_scalar(tm.group(4), cf.order, lineno, bcol + tm.start(4))
            target = comps[-1][2] if comps else curve_terms
            if mono in target:
                raise FormatError(f"repeated monomial {mono}", lineno, bcol)
            target[mono] = val
        elif key == "value":
            if len(toks) != 1:
                raise FormatError("value takes one scalar", lineno, bcol)
            cf.values.append(parse_scalar(toks[0][0], cf.order, lineno, toks[0][1]))
        elif key == "pair":
            if len(toks) != 2:
                raise FormatError("pair takes two scalars", lineno, bcol)
            cf.pairs.append(tuple(parse_scalar(t, cf.order, lineno, c) for t, c in toks))  # type: ignore[arg-type]
        elif key == "map":
            if len(toks) != 4:
                raise FormatError("map takes four scalars a b c d", lineno, bcol)
            vals = [parse_scalar(t, cf.order, lineno, c) for t, c in toks]
            try:
                cf.maps.append(MobiusMap(*vals))
            except Exception as exc:
                raise FormatError(str(exc), lineno, bcol) from None
    if not seen_header:
        raise FormatError(f"missing 'format: {FORMAT_VERSION}' header", 1, 1)
    if curve_deg is not None:
        try:
            parts = [(Curve(d, terms), k) for d, k, terms in comps]
            if comps and not curve_terms:
                cf.curve = Curve.product(parts)
            else:
                cf.curve = Curve(curve_deg, curve_terms, parts or None)
        except Exception as exc:
            raise FormatError(f"invalid curve: {exc}") from None
        if cf.curve.degree != curve_deg:
            raise FormatError(f"curve degree {cf.curve.degree} does not match header {curve_deg}")
    return cf


def emit(cf: ConfigFile) -> str:
    out = [f"format: {FORMAT_VERSION}", f"order: {cf.order}"]
    for p, lab in zip(cf.points, cf.labels or [None] * len(cf.points)):
        out.append(f"point: {format_point(p)}")
        if lab:
            out.append(f"label: {lab}")
    if cf.curve is not None:
        out.append(f"curve: {cf.curve.degree}")
        if cf.curve.components:
            for comp, k in cf.curve.components:
                out.append(f"component: {comp.degree} {k}")
                out.extend(_terms(comp))
        else:
            out.extend(_terms(cf.curve))
    for v in cf.values:
        out.append(f"value: {format_scalar(v)}")
    for x, y in cf.pairs:
        out.append(f"pair: {format_scalar(x)} {format_scalar(y)}")
    for f in cf.maps:
        out.append("map: " + " ".join(format_scalar(v) for v in (f.a, f.b, f.c, f.d)))
    return "\n".join(out) + "\n"


def _terms(c: Curve) -> list[str]:
    return [f"term: {i},{j},{k}: {format_scalar(v)}" for (i, j, k), v in c.coeffs.items()]


def from_configuration(config, curve: Curve | None = None) -> ConfigFile:
    labels = list(config.labels) if config.labels else [None] * len(config.points)
    return ConfigFile(config.order, list(config.points), labels, curve)


def load(path: str) -> ConfigFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def save(cf: ConfigFile, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit(cf))
