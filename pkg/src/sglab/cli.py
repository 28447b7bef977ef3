"""Command-line entry point: ``sglab gen | verify | classify | measure | describe``."""
from __future__ import annotations

import argparse
import logging
import random
import sys
import time
from fractions import Fraction
from typing import Sequence, TextIO

from . import __version__, cycfield, fileformat
from .addcomb import (
    MODES,
    MobiusMap,
    expansion_report,
    grid_stats,
    mobius_incidences,
    mobius_incidences_naive,
    recover_subgroup,
)
from .cubicgroup import build_group_map
from .curves import factor_lines
from .cycfield import CycNum
from .errors import FormatError, SGLabError
from .projgeom import COORDINATE_LINES, ProjLine, ProjPoint, join
from .sgcore import (
    ClassifierParams,
    Configuration,
    assign_components,
    build_index,
    classify,
    fermat_config,
    find_curve,
    random_transform,
    sg_check,
    triple_count_naive,
)

log = logging.getLogger("sglab")

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class Report:
    """Ordered key: value records."""

    def __init__(self, command: str):
        self.rows: list[tuple[str, str]] = [("command", command)]

    def add(self, key: str, value) -> None:
        if isinstance(value, bool):
            value = "true" if value else "false"
        self.rows.append((key, str(value)))

    def render(self) -> str:
        return "".join(f"{k}: {v}\n" for k, v in self.rows)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _load_config(path: str) -> tuple[fileformat.ConfigFile, Configuration]:
    cf = fileformat.load(path)
    return cf, cf.configuration()


def _fmt_line(l) -> str:
    return fileformat.format_point(l).replace("[", "(").replace("]", ")")


def _fmt_transform(t) -> str:
    return "; ".join(" ".join(fileformat.format_scalar(x) for x in row) for row in t.matrix)


# commands


def cmd_gen(args, rep: Report, out: TextIO) -> None:
    if args.kind != "fermat":
        raise UsageError(f"unknown generator {args.kind!r}")
    if args.n < 3:
        raise UsageError("fermat configurations need n >= 3")
    config = fermat_config(args.n)
    rep.add("param.n", args.n)
    rep.add("param.seed", args.seed)
    rep.add("param.random_transform", bool(args.random_transform))
    if args.drop:
        labels = config.labels or []
        missing = [d for d in args.drop if d not in labels]
        if missing:
            raise UsageError(f"no such point label(s): {', '.join(missing)}")
        config = config.without(labels.index(d) for d in args.drop)
        rep.add("param.drop", ",".join(args.drop))
    if args.random_transform:
        t = random_transform(args.n, random.Random(args.seed))
        config = config.transformed(t)
        rep.add("transform", _fmt_transform(t))
    text = fileformat.emit(fileformat.from_configuration(config))
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        rep.add("output", args.output)
    else:
        out.write(text)
    rep.add("points", len(config.points))
    rep.add("order", config.order)


def cmd_verify(args, rep: Report, out: TextIO) -> None:
    _, config = _load_config(args.input)
    rep.add("input", args.input)
    rep.add("param.limit", args.limit)
    r = sg_check(config, limit=args.limit)
    rep.add("points", len(config.points))
    rep.add("is_sg", r.is_sg)
    rep.add("collinear", r.collinear)
    rep.add("ordinary_lines", r.ordinary_count)
    for l in r.ordinary_lines:
        rep.add("ordinary_line", _fmt_line(l))
    if r.ordinary_count > len(r.ordinary_lines):
        rep.add("ordinary_lines_truncated", r.ordinary_count - len(r.ordinary_lines))
    rep.add("triple_count", r.triple_count)
    rep.add("histogram", " ".join(f"{k}:{v}" for k, v in r.line_size_histogram.items()))


def cmd_classify(args, rep: Report, out: TextIO) -> None:
    try:
        params = ClassifierParams(d=args.d, delta=args.delta, epsilon=args.epsilon, max_m=args.max_m, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _, config = _load_config(args.input)
    rep.add("input", args.input)
    rep.add("param.d", params.d)
    rep.add("param.delta", params.delta)
    rep.add("param.epsilon", params.epsilon)
    rep.add("param.significance", params.significance)
    rep.add("param.max_m", params.resolved_max_m(len(config.points)))
    rep.add("param.seed", params.seed)
    v = classify(config, params)
    rep.add("points", len(config.points))
    rep.add("outcome", v.outcome)
    rep.add("stage", v.stage)
    rep.add("stages", ",".join(v.stages))
    if v.reason:
        rep.add("reason", v.reason)
    if v.curve is not None:
        rep.add("curve", v.curve)
        for j, (comp, k) in enumerate(v.curve.component_list()):
            rep.add(f"component.{j}", f"{comp}" + (f" ^{k}" if k != 1 else ""))
    if v.kind is not None:
        rep.add("cubic_kind", v.kind.value)
    if v.partition is not None:
        rep.add("partition", " ".join(str(s) for s in v.partition.sizes()) + f" err={len(v.partition.errors)}")
    if v.dropped_components:
        rep.add("dropped_components", ",".join(map(str, v.dropped_components)))
    for j, g in enumerate(v.grid_reports):
        if g is not None:
            rep.add(f"grid.{j}", f"size={g.set_size} diff={g.diff_or_ratio_size} constant={g.doubling_constant}")
    for j, c in enumerate(v.certificates):
        if c is not None:
            rep.add(f"certificate.{j}", f"m={c.m} lambda={fileformat.format_scalar(c.lam)} sym_diff={c.sym_diff}")
    if v.m is not None:
        rep.add("m", v.m)
    if v.transform is not None:
        rep.add("transform", _fmt_transform(v.transform))
    if v.line is not None:
        rep.add("ordinary_line", _fmt_line(v.line))


def cmd_measure(args, rep: Report, out: TextIO) -> None:
    cf = fileformat.load(args.input)
    rep.add("input", args.input)
    rep.add("measure", args.what)
    if args.what == "triples":
        config = cf.configuration()
        idx = build_index(config)
        rep.add("points", len(config.points))
        rep.add("triple_count", idx.triple_count())
        if args.check:
            rep.add("triple_count_naive", triple_count_naive(config))
        rep.add("lines", len(idx))
    elif args.what == "grids":
        if cf.values:
            kind = args.kind
            rep.add("param.kind", kind)
            _grid_rows(rep, "values", cf.values, kind, args.max_m)
        else:
            config = cf.configuration()
            params = ClassifierParams(seed=args.seed)
            curve = cf.curve or find_curve(config, params, build_index(config))
            if curve is None:
                raise SGLabError("no low-degree curve through the configuration")
            gm = build_group_map(curve, hints=config.points, seed=args.seed)
            part = assign_components(config, curve)
            rep.add("cubic_kind", gm.kind.value)
            if gm.group == "chord-tangent":
                raise SGLabError("grid statistics need an additive or multiplicative chart")
            for j, idxs in enumerate(part.parts):
                if idxs:
                    vals = [gm.rho(config.points[i]).value for i in idxs]
                    _grid_rows(rep, f"component.{j}", vals, gm.group, args.max_m)
            rep.add("unassigned", len(part.errors))
    elif args.what == "expansion":
        if not cf.values:
            raise SGLabError("expansion needs 'value:' entries")
        psi = cf.maps[0] if cf.maps else MobiusMap(*(Fraction(x) for x in args.psi.split()))
        rep.add("param.mode", args.mode)
        rep.add("param.psi", " ".join(fileformat.format_scalar(v) for v in (psi.a, psi.b, psi.c, psi.d)))
        rep.add("param.restrict", bool(args.restrict))
        r = expansion_report(cf.values, psi, args.mode, restrict=args.restrict)
        rep.add("set_size", r.set_size)
        rep.add("excluded", r.excluded)
        rep.add(r.first_label, r.first_size)
        rep.add(r.second_label, r.second_size)
        rep.add("max", r.maximum)
        rep.add("exponent", r.exponent)
        rep.add("normalized", f"{r.normalized:.6f}")
    elif args.what == "mobius":
        rep.add("pairs", len(cf.pairs))
        rep.add("maps", len(cf.maps))
        fast = mobius_incidences(cf.pairs, cf.maps)
        rep.add("incidences", fast)
        if args.check:
            rep.add("incidences_naive", mobius_incidences_naive(cf.pairs, cf.maps))


def _grid_rows(rep: Report, prefix: str, vals: Sequence[CycNum], kind: str, max_m: int | None) -> None:
    g = grid_stats(vals, kind)
    rep.add(f"{prefix}.size", g.set_size)
    rep.add(f"{prefix}.diff_size", g.diff_or_ratio_size)
    rep.add(f"{prefix}.doubling_constant", g.doubling_constant)
    if kind == "multiplicative":
        cert = recover_subgroup(vals, max_m or 2 * len(vals))
        if cert is None:
            rep.add(f"{prefix}.certificate", "none")
        else:
            rep.add(f"{prefix}.certificate",
                    f"m={cert.m} lambda={fileformat.format_scalar(cert.lam)} sym_diff={cert.sym_diff}")


def cmd_describe(args, rep: Report, out: TextIO) -> None:
    cf = fileformat.load(args.input)
    rep.add("input", args.input)
    curve = cf.curve
    hints = cf.points
    if curve is None:
        config = cf.configuration()
        curve = find_curve(config, ClassifierParams(seed=args.seed), build_index(config))
        if curve is None:
            raise SGLabError("file has no curve and none could be fitted")
        rep.add("curve_source", "fitted")
    else:
        rep.add("curve_source", "file")
    if curve.degree != 3:
        rep.add("curve", curve)
        raise SGLabError(f"group charts exist only for cubics (degree {curve.degree})")
    if not curve.components:
        curve = factor_lines(curve, _candidate_lines(hints))
    gm = build_group_map(curve, hints=hints, seed=args.seed)
    for line in gm.describe():
        k, _, v = line.partition(": ")
        rep.add(k.replace(" ", "_"), v)


def _candidate_lines(hints: Sequence[ProjPoint], cap: int = 60) -> list[ProjLine]:
    """Coordinate lines plus joins of hint points, for splitting off line factors."""
    out = list(COORDINATE_LINES)
    pts = list(dict.fromkeys(hints))[:cap]
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            out.append(join(p, q))
    return out


# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sglab", description="Exact Sylvester-Gallai configuration tools over cyclotomic fields.")
    p.add_argument("--version", action="version", version=f"sglab {__version__}")
    p.add_argument("--threads", type=int, default=1, help="worker cap (results do not depend on it)")
    p.add_argument("--max-order", type=int, default=None, help="largest cyclotomic order for automatic promotion")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a generated configuration")
    g.add_argument("kind", choices=["fermat"])
    g.add_argument("n", type=int)
    g.add_argument("-o", "--output", default="-")
    g.add_argument("--random-transform", action="store_true", help="apply a seeded random projective map")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--drop", action="append", default=[], metavar="LABEL", help="remove a point by label")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="Sylvester-Gallai check")
    v.add_argument("input")
    v.add_argument("--limit", type=int, default=10, help="ordinary lines to list")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("classify", help="run the structure classifier")
    c.add_argument("input")
    c.add_argument("--d", type=int, default=3)
    c.add_argument("--delta", type=_fraction, default=Fraction(1, 5))
    c.add_argument("--epsilon", type=_fraction, default=Fraction(1, 20))
    c.add_argument("--max-m", type=int, default=None)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_classify)

    m = sub.add_parser("measure", help="combinatorial measurements")
    m.add_argument("what", choices=["grids", "expansion", "mobius", "triples"])
    m.add_argument("input")
    m.add_argument("--kind", choices=["additive", "multiplicative"], default="multiplicative")
    m.add_argument("--max-m", type=int, default=None)
    m.add_argument("--mode", choices=list(MODES), default="two-pt")
    m.add_argument("--psi", default="1 1 0 1", help="Mobius map 'a b c d' when the file has none")
    m.add_argument("--restrict", action="store_true", help="drop points outside the expansion domain")
    m.add_argument("--check", action="store_true", help="also run the slow oracle")
    m.add_argument("--seed", type=int, default=0)
    m.set_defaults(func=cmd_measure)

    d = sub.add_parser("describe", help="print the group charts of a cubic")
    d.add_argument("input")
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(func=cmd_describe)
    return p


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    out = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if args.threads < 1:
        parser.error("--threads must be positive")
    rep = Report(args.command)
    rep.add("version", __version__)
    rep.add("param.threads", args.threads)
    start = time.perf_counter()
    old_max = cycfield.get_max_order()
    status = EXIT_OK
    try:
        if args.max_order is not None:
            cycfield.set_max_order(args.max_order)
        rep.add("param.max_order", cycfield.get_max_order())
        args.func(args, rep, out)
        rep.add("status", "ok")
    except UsageError as exc:
        status = EXIT_USAGE
        rep.add("status", "usage-error")
        rep.add("error", exc)
    except FormatError as exc:
        status = EXIT_USAGE
        rep.add("status", "parse-error")
        rep.add("error", exc)
    except OSError as exc:
        status = EXIT_USAGE
        rep.add("status", "io-error")
        rep.add("error", exc)
    except (SGLabError, ValueError) as exc:
        status = EXIT_DOMAIN
        rep.add("status", "domain-error")
        rep.add("error", f"{type(exc).__name__}: {exc}")
    finally:
        cycfield.set_max_order(old_max)
    rep.add("elapsed_seconds", f"{time.perf_counter() - start:.3f}")
    rep.add("exit", status)
    target = out if status == EXIT_OK else sys.stderr
    if args.command == "gen" and status == EXIT_OK and getattr(args, "output", "-") == "-":
        target = sys.stderr
    target.write(rep.render())
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
