"""Command-line front end: parse, render, stats, verify, convert, reduce.

Exit codes: 0 success, 1 usage error, 2 parse or verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .arithmetic import reduce
from .codec import RenderOptions, classify, format_value, parse_quantity, parse_value, render_quantity
from .core import (AmbiguousUnitError, FracPart, FractionForm, InsertionContext, IntPart, LigatureStyle, Policy, Quantity, Rational,
                   SEVENTY, SuanshuError)
from .corpus import load_corpus, roundtrip_verify, stats, verify_series, verify_statements
from .metrology import Dimension, Measure, UnitRegistry, convert, decompose, default_registry, noun_lexicon

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class CliConfig:
    ligatures: LigatureStyle = LigatureStyle.MANUSCRIPT
    zhi: Policy = Policy.AUTO
    you: Policy = Policy.AUTO
    output: str = "text"
    unit_table: Optional[Path] = None
    corpus: Optional[Path] = None
    seventy: str = SEVENTY

    def registry(self) -> UnitRegistry:
        if self.unit_table is None:
            return default_registry()
        if not self.unit_table.is_file():
            raise UsageError(f"unit table not found: {self.unit_table}")
        return UnitRegistry.from_tsv(self.unit_table)


def _emit(config: CliConfig, obj: dict, text: str, out) -> None:
    if config.output == "json":
        out.write(json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")


def _inputs(args_text: list[str], stdin) -> Iterable[str]:
    if args_text:
        yield from args_text
    else:
        for line in stdin:
            if line.strip():
                yield line.rstrip("\n")


def _reduced(q: Quantity) -> Quantity:
    f = q.frac
    if f is None or f.num is None or f.den == 0:
        return q
    r = reduce(f.value)
    return q.with_frac(FracPart(r.num, r.den, f.unit, FractionForm.A, elided=f.elided)) if r != f.value else q


def _magnitude(q: Quantity) -> Optional[str]:
    if q.frac is not None and (q.frac.num is None or q.frac.den == 0):
        return None
    m = q.magnitude()
    text = str(m.numerator) if m.denominator == 1 else f"{m.numerator}/{m.denominator}"
    return f"{text} {q.unit.key}" if q.unit is not None else text


def _describe(text: str, q: Quantity) -> dict:
    cat = classify(q)
    noun = noun_lexicon().get(q.noun) if q.noun else None
    units = [p.unit.key for p in q.int_parts if p.unit is not None]
    if q.frac is not None and q.frac.unit is not None and q.frac.unit.key not in units:
        units.append(q.frac.unit.key)
    return {
        "input": text,
        "value": format_value(q),
        "reduced": format_value(_reduced(q)),
        "magnitude": _magnitude(q),
        "noun": q.noun,
        "gloss": noun.gloss if noun else None,
        "units": units,
        "form": q.frac.form.value if q.frac is not None else None,
        "category": cat.label if cat else None,
        "flags": sorted(q.flags),
    }


def cmd_parse(args, config: CliConfig, out, err) -> int:
    registry = config.registry()
    dimension = Dimension(args.dimension) if args.dimension else None
    status = EXIT_OK
    for text in _inputs(args.text, sys.stdin):
        try:
            q = parse_quantity(text, series=args.series, dimension=dimension, registry=registry,
                               seventy=config.seventy)
        except (SuanshuError, ValueError) as exc:
            err.write(f"{text}: {exc}\n")
            if config.output == "json":
                _emit(config, {"input": text, "error": str(exc)}, "", out)
            status = EXIT_FAIL
            continue
        d = _describe(text, q)
        noun = f"{d['noun']} ({d['gloss']}) | " if d["gloss"] else ""
        line = (f"{text}\t{noun}{d['value'].split(' | ')[-1]}\treduced={d['reduced'].split(' | ')[-1]}"
                f"\tform={d['form'] or '-'}\tcategory={d['category'] or '-'}\tflags={','.join(d['flags']) or '-'}")
        _emit(config, d, line, out)
    return status


def _render_options(args, config: CliConfig) -> RenderOptions:
    form = FractionForm(args.form) if args.form else None
    try:
        return RenderOptions(form=form, zhi=config.zhi, you=config.you, ligatures=config.ligatures,
                             insertion=InsertionContext(args.insertion), seventy=config.seventy)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _value_from_flags(args, registry: UnitRegistry, dimension: Optional[Dimension]) -> str:
    if args.int is None and args.frac is None:
        raise UsageError("render needs a value string or --int/--frac")
    unit = registry.get(args.unit, dimension) if args.unit else None
    terms = []
    if args.int is not None:
        terms.append(f"{args.int} {unit.key}" if unit else str(args.int))
    if args.frac is not None:
        terms.append(f"{args.frac} {unit.key}" if unit else args.frac)
    return " + ".join(terms)


def cmd_render(args, config: CliConfig, out, err) -> int:
    registry = config.registry()
    dimension = Dimension(args.dimension) if args.dimension else None
    opts = _render_options(args, config)
    values = args.value or [_value_from_flags(args, registry, dimension)]
    status = EXIT_OK
    for value in values:
        try:
            q = parse_value(value, opts.form, insertion=opts.insertion, registry=registry)
            text = render_quantity(q, opts)
        except (SuanshuError, ValueError) as exc:
            err.write(f"{value}: {exc}\n")
            status = EXIT_FAIL
            continue
        _emit(config, {"value": format_value(q), "surface": text}, text, out)
    return status


def cmd_stats(args, config: CliConfig, out, err) -> int:
    report = stats(load_corpus(_corpus_path(args, config)))
    if config.output == "json":
        out.write(json.dumps(report.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")
    else:
        out.write(report.to_text() + "\n")
    for d in report.undocumented:
        err.write(f"undocumented discrepancy {d.key}: claimed {d.claimed}, computed {d.computed}\n")
    return EXIT_FAIL if report.undocumented else EXIT_OK


def cmd_verify(args, config: CliConfig, out, err) -> int:
    records = load_corpus(_corpus_path(args, config))
    reports = [roundtrip_verify(records), verify_statements(records), verify_series(records)]
    for rep in reports:
        _emit(config, rep.to_dict(), rep.to_text(), out)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def _corpus_path(args, config: CliConfig) -> Optional[Path]:
    path = args.path or config.corpus
    if path is not None and not Path(path).is_file():
        raise UsageError(f"corpus file not found: {path}")
    return path


_AMOUNT = re.compile(r"(\d+)?\s*(?:(\d+)/(\d+))?\s+(\S+)")


def _read_amount(text: str, config: CliConfig, registry: UnitRegistry, dimension: Optional[Dimension]) -> Quantity:
    """A canonical value string, a shorthand like '4176 1/5 zhu', or written text."""
    m = _AMOUNT.fullmatch(text.strip())
    if m and (m.group(1) or m.group(2)):
        whole, num, den, name = m.groups()
        unit = registry.get(name, dimension)
        ints = (IntPart(int(whole), unit),) if whole and int(whole) else ()
        frac = FracPart(int(num), int(den), unit, FractionForm.B) if num else None
        return Quantity(ints, frac)
    try:
        return parse_value(text, registry=registry)
    except (SuanshuError, KeyError):
        return parse_quantity(text, dimension=dimension, registry=registry, seventy=config.seventy)


def _chain(args, registry: UnitRegistry, q: Quantity, dimension: Optional[Dimension]) -> list:
    if args.chain:
        return [registry.get(name.strip(), dimension) for name in args.chain.split(",")]
    return registry.chain(q.unit.dimension)


def cmd_convert(args, config: CliConfig, out, err) -> int:
    if (args.to is None) == (not args.decompose):
        raise UsageError("give exactly one of --to or --decompose")
    registry = config.registry()
    dimension = Dimension(args.dimension) if args.dimension else None
    target = registry.get(args.to, dimension) if args.to else None
    status = EXIT_OK
    for text in args.quantity:
        try:
            q = _read_amount(text, config, registry, dimension)
            if q.unit is None:
                raise UsageError(f"{text!r} has no unit to convert from")
            m = Measure(q.magnitude(), q.unit, args.power)
            if args.decompose:
                parts = decompose(m, _chain(args, registry, q, dimension))
                surface = render_quantity(parts, RenderOptions(zhi=config.zhi, you=config.you,
                                                               ligatures=config.ligatures, seventy=config.seventy))
                _emit(config, {"input": text, "value": format_value(parts), "surface": surface},
                      f"{format_value(parts)}\t{surface}", out)
                continue
            m = convert(m, target)
        except (AmbiguousUnitError, UsageError):
            raise
        except (SuanshuError, ValueError) as exc:
            err.write(f"{text}: {exc}\n")
            status = EXIT_FAIL
            continue
        v = m.value
        num = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        power = f"^{m.power}" if m.power > 1 else ""
        _emit(config, {"input": text, "value": num, "unit": target.key, "power": m.power},
              f"{num} {target.key}{power}", out)
    return status


def cmd_reduce(args, config: CliConfig, out, err) -> int:
    status = EXIT_OK
    for text in args.fraction:
        try:
            r = Rational.parse(text)
        except (SuanshuError, ValueError) as exc:
            err.write(f"{text}: {exc}\n")
            status = EXIT_FAIL
            continue
        got = reduce(r)
        _emit(config, {"input": text, "num": got.num, "den": got.den}, str(got), out)
    return status


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--ligatures", choices=[s.value for s in LigatureStyle], default=argparse.SUPPRESS)
    p.add_argument("--zhi", choices=[s.value for s in Policy], default=argparse.SUPPRESS)
    p.add_argument("--you", choices=[s.value for s in Policy], default=argparse.SUPPRESS)
    p.add_argument("--output", choices=["text", "json"], default=argparse.SUPPRESS)
    p.add_argument("--units", type=Path, default=argparse.SUPPRESS, help="alternative unit table (TSV)")
    p.add_argument("--corpus", type=Path, default=argparse.SUPPRESS, help="corpus TSV for stats/verify")
    p.add_argument("--seventy", default=argparse.SUPPRESS, help="glyph used for the seventy ligature")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="suanshu", parents=[common],
                     description="Read, write and check early Chinese numbers, fractions and measures.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    dims = [d.value for d in Dimension]

    p = sub.add_parser("parse", parents=[common], help="read expressions (arguments or one per stdin line)")
    p.add_argument("text", nargs="*")
    p.add_argument("--series", action="store_true", help="allow abbreviated fractions from shared-denominator lists")
    p.add_argument("--dimension", choices=dims)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("render", parents=[common], help="write a value as text")
    p.add_argument("value", nargs="*", help="value strings such as '16 chi + 12/18 chi'")
    p.add_argument("--int", type=int)
    p.add_argument("--frac")
    p.add_argument("--unit")
    p.add_argument("--form", choices=[f.value for f in FractionForm])
    p.add_argument("--insertion", choices=[c.value for c in InsertionContext], default="uninserted")
    p.add_argument("--dimension", choices=dims)
    p.set_defaults(func=cmd_render)

    for name, func, text in (("stats", cmd_stats, "pattern counts and tables over a corpus"),
                             ("verify", cmd_verify, "round-trip, statement and series checks over a corpus")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("path", nargs="?", type=Path)
        p.set_defaults(func=func)

    p = sub.add_parser("convert", parents=[common], help="convert an amount to another unit")
    p.add_argument("quantity", nargs="+")
    p.add_argument("--to", help="target unit")
    p.add_argument("--decompose", action="store_true", help="split over a descending unit chain instead")
    p.add_argument("--chain", help="comma-separated units for --decompose; default is every unit of the dimension")
    p.add_argument("--power", type=int, default=1, choices=[1, 2, 3])
    p.add_argument("--dimension", choices=dims)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("reduce", parents=[common], help="reduce fractions to lowest terms")
    p.add_argument("fraction", nargs="+")
    p.set_defaults(func=cmd_reduce)
    return parser


def config_from(args) -> CliConfig:
    g = vars(args)
    return CliConfig(
        ligatures=LigatureStyle(g.get("ligatures", "manuscript")),
        zhi=Policy(g.get("zhi", "auto")),
        you=Policy(g.get("you", "auto")),
        output=g.get("output", "text"),
        unit_table=g.get("units"),
        corpus=g.get("corpus"),
        seventy=g.get("seventy", SEVENTY),
    )


def main(argv: Optional[list[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config = config_from(args)
    logging.basicConfig(format="suanshu: %(levelname)s: %(message)s", stream=err)
    try:
        return args.func(args, config, out, err)
    except UsageError as exc:
        err.write(f"suanshu: {exc}\n")
        return EXIT_USAGE
    except (KeyError, AmbiguousUnitError) as exc:
        err.write(f"suanshu: {exc.args[0] if exc.args else exc}\n")
        return EXIT_USAGE
    except SuanshuError as exc:
        err.write(f"suanshu: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
