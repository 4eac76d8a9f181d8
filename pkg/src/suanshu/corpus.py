"""The transcribed corpus: loading, tallies, and consistency checks."""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Union

from .codec import (RenderOptions, classify, format_value, parse_quantity, parse_value, render_quantity,
                    resolve_elision)
from .core import (ImproperFractionError, InsertionContext, ParseError, PatternCategory, Quantity, Rational,
                   SuanshuError, normalize)
from .statements import (Division, Product, Reduction, Share, evaluate_division, evaluate_product,
                         evaluate_reduction, evaluate_share, parse_statement, product_value)

COLUMNS = ("id kind example inventory strips context surface value category insertion zhi mw flags "
           "count series literal note").split()
KINDS = ("expr", "stmt")
INVENTORIES = ("integers", "illustration", "mono", "a1", "b1", "d1", "a2", "b2", "c2", "d2", "lexical",
               "thirds", "elision", "statement")
BIDIMENSIONAL = ("a1", "b1", "c1", "d1", "a2", "b2", "c2", "d2")
CATEGORIES = ("none", "mono", "half", "third", "two_thirds", *BIDIMENSIONAL)
# flags the parser sets by itself; the rest are annotations only
PARSER_FLAGS = {"mw_omitted", "mw_tripled", "elided_den", "stray_numeral", "yi_ban", "illegible_digits",
                "illegible_prefix", "unit_as_noun", "lenient_yi"}
ANNOTATION_FLAGS = {"copyist_error", "unit_unstated", "verb_use", "uncertain", "ambiguous_segmentation",
                    "inferred_operand"}
_VALUE_TERM = r"(\(1\) \S+|\d+( \S+)?|(\d+|\?|\d+\+\?)/(\d+|_|\[\d+\])( \S+)?)"
VALUE_PATTERN = re.compile(rf"([^|\s]+ \| )?{_VALUE_TERM}( \+ {_VALUE_TERM})*")


class CorpusSchemaError(SuanshuError, ValueError):
    pass


@dataclass
class CorpusRecord:
    id: str
    kind: str
    example: str
    inventory: str
    strips: str
    context: str
    surface: str
    value: str
    category: str
    insertion: str
    zhi: Optional[bool]
    mw: Optional[bool]
    flags: frozenset[str]
    count: int
    series: str
    literal: str
    note: str
    quantity: Optional[Quantity] = field(default=None, repr=False)
    improper: Optional[ImproperFractionError] = field(default=None, repr=False)
    problems: list[str] = field(default_factory=list)

    @property
    def series_mode(self) -> bool:
        return self.inventory == "elision"

    @property
    def insertion_context(self) -> Optional[InsertionContext]:
        return None if self.insertion == "-" else InsertionContext(self.insertion)


def _flag_set(text: str) -> frozenset[str]:
    return frozenset() if text == "-" else frozenset(text.split(","))


def _check_row(n: int, row: dict) -> None:
    def bad(msg):
        raise CorpusSchemaError(f"row {n} ({row.get('id')}): {msg}")

    if row["kind"] not in KINDS:
        bad(f"kind {row['kind']!r}")
    if row["inventory"] not in INVENTORIES:
        bad(f"inventory {row['inventory']!r}")
    if not row["count"].isdigit() or int(row["count"]) < 1:
        bad(f"count {row['count']!r}")
    unknown = _flag_set(row["flags"]) - PARSER_FLAGS - ANNOTATION_FLAGS
    if unknown:
        bad(f"unknown flags {sorted(unknown)}")
    if row["kind"] == "expr":
        if row["category"] not in CATEGORIES:
            bad(f"category {row['category']!r}")
        if row["insertion"] not in {c.value for c in InsertionContext}:
            bad(f"insertion {row['insertion']!r}")
        if row["zhi"] not in ("0", "1") or row["mw"] not in ("0", "1"):
            bad("zhi and mw must be 0 or 1")
        for col in ("value", "literal"):
            if (row[col] != "-" or col == "value") and not VALUE_PATTERN.fullmatch(row[col]):
                bad(f"{col} {row[col]!r} is not a value string")


def read_records(lines: Iterable[str]) -> list[CorpusRecord]:
    reader = csv.DictReader(lines, delimiter="\t", quoting=csv.QUOTE_NONE)
    if reader.fieldnames is None:
        return []
    if tuple(reader.fieldnames or ()) != tuple(COLUMNS):
        raise CorpusSchemaError(f"expected columns {COLUMNS}, got {reader.fieldnames}")
    records = []
    seen = set()
    for n, row in enumerate(reader, start=2):
        if None in row or any(v is None for v in row.values()):
            raise CorpusSchemaError(f"row {n}: wrong number of fields")
        _check_row(n, row)
        if row["id"] in seen:
            raise CorpusSchemaError(f"row {n}: duplicate id {row['id']!r}")
        seen.add(row["id"])
        flag01 = {"0": False, "1": True}
        records.append(CorpusRecord(
            id=row["id"], kind=row["kind"], example=row["example"], inventory=row["inventory"],
            strips=row["strips"], context=row["context"], surface=row["surface"], value=row["value"],
            category=row["category"], insertion=row["insertion"], zhi=flag01.get(row["zhi"]),
            mw=flag01.get(row["mw"]), flags=_flag_set(row["flags"]), count=int(row["count"]),
            series=row["series"], literal=row["literal"], note=row["note"]))
    return records


def default_corpus_path():
    return resources.files("suanshu").joinpath("data/corpus.tsv")


def load_corpus(path: Union[str, Path, None] = None) -> list[CorpusRecord]:
    """Read and parse the corpus.

    A malformed file raises ``CorpusSchemaError``. A surface that fails to
    parse or disagrees with its annotation is noted in the record's
    ``problems`` and loading goes on.
    """
    if path is None:
        text = default_corpus_path().read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    records = read_records(text.splitlines())
    for rec in records:
        if rec.kind == "expr":
            _attach_parse(rec)
    return records


def _attach_parse(rec: CorpusRecord) -> None:
    try:
        rec.quantity = parse_quantity(rec.surface, series=rec.series_mode)
    except ImproperFractionError as exc:
        rec.improper = exc
        if "copyist_error" not in rec.flags:
            rec.problems.append(f"parse: {exc}")
        return
    except (ParseError, ValueError) as exc:
        rec.problems.append(f"parse: {exc}")
        return
    cat = classify(rec.quantity)
    label = cat.label if cat else "none"
    if label != rec.category:
        rec.problems.append(f"classifier reads {label}, annotated {rec.category}")


def literal_reading(rec: CorpusRecord) -> Optional[str]:
    """The value string of what the surface literally says."""
    if rec.quantity is not None:
        return _unresolved(format_value(rec.quantity))
    if rec.improper is not None:
        unit = getattr(rec.improper, "unit", None)
        frac = f"{rec.improper.num}/{rec.improper.den}" + (f" {unit.key}" if unit else "")
        head = format_value(rec.improper.partial) if rec.improper.partial else ""
        return f"{head} + {frac}" if head else frac
    return None


def _unresolved(value: str) -> str:
    return re.sub(r"/\[\d+\]", "/_", value)


def _weight(records: Iterable[CorpusRecord]) -> int:
    return sum(r.count for r in records)


# --- statistics -----------------------------------------------------------

# figures quoted by the source for its own itemized lists; (key, figure)
HEADLINES: list[tuple[str, Union[int, str]]] = [
    ("total_expressions", 301), ("mono", 83), ("mono_no_mw", 76), ("mono_mw", 8),
    ("bidim", 143), ("bidim_unit", 46), ("bidim_nonunit", 97),
    ("a1", 24), ("b1", 11), ("c1", 0), ("d1", 11), ("a2", 11), ("b2", 43), ("c2", 7), ("d2", 36),
    ("a", 35), ("b", 54), ("c", 7), ("d", 47),
    ("half", 47), ("half_mw", 12), ("third_lex", 24), ("third_lex_mw", 15), ("two_thirds_lex", 4),
    ("two_thirds_lex_mw", 3),
    ("table1", "[[18, 4], [10, 18]]"), ("table2", "[[76, 2], [13, 51]]"), ("table2_total", 142),
    ("table2_row_uninserted", 78), ("table2_row_inserted", 64), ("table2_col_no_zhi", 89), ("table2_col_zhi", 53),
    ("rate_mono", "83/129"), ("rate_zhi_given_inserted", "51/64"), ("rate_uninserted_given_no_zhi", "76/89"),
    ("rate_no_mw_given_regular", "18/22"), ("rate_mw_given_lexical", "18/28"),
]

# mismatches already analysed; anything else makes the stats command fail
DOCUMENTED = {
    "total_expressions": "follows from the one-part shortfall",
    "mono": "itemized one-part lists sum to 82",
    "mono_no_mw": "itemized list without a measure word sums to 75",
    "mono_mw": "itemized list with a measure word has 7 entries",
    "rate_mono": "follows from the one-part shortfall",
    "record:ex-56": "numerator 1 yet listed among non-unit fractions",
    "record:ex-96": "no measure word after 分 yet listed with measure-word forms",
    "record:thirds-qian": "two forms for 2/3 absent from the non-unit measure-word list",
}


@dataclass(frozen=True)
class Discrepancy:
    key: str
    claimed: str
    computed: str
    note: str = ""

    @property
    def documented(self) -> bool:
        return self.key in DOCUMENTED


@dataclass
class StatsReport:
    counts: dict[str, int]
    classifier_counts: dict[str, int]
    table1: list[list[int]]
    table2: list[list[int]]
    rates: dict[str, Rational]
    discrepancies: list[Discrepancy]

    @property
    def undocumented(self) -> list[Discrepancy]:
        return [d for d in self.discrepancies if not d.documented]

    def to_dict(self) -> dict:
        return {
            "counts": self.counts,
            "classifier_counts": self.classifier_counts,
            "table1": {"rows": ["regular", "lexical"], "columns": ["no_mw", "mw"], "cells": self.table1},
            "table2": {"rows": ["uninserted", "inserted"], "columns": ["no_zhi", "zhi"], "cells": self.table2},
            "rates": {k: {"num": r.num, "den": r.den} for k, r in self.rates.items()},
            "discrepancies": [{"key": d.key, "claimed": d.claimed, "computed": d.computed, "note": d.note,
                               "documented": d.documented} for d in self.discrepancies],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)

    def to_text(self) -> str:
        c = self.counts
        lines = [f"patterns a:{c['a']} b:{c['b']} c:{c['c']} d:{c['d']} "
                 f"(a1:{c['a1']} b1:{c['b1']} c1:{c['c1']} d1:{c['d1']})", "", "pattern counts (as listed)"]
        lines += _columns([(k, str(v), str(self.classifier_counts.get(k, ""))) for k, v in self.counts.items()],
                          ("key", "listed", "classified"))
        lines += ["", "1/3 and 2/3        no_mw  mw"]
        for name, row in zip(("regular", "lexical"), self.table1):
            lines.append(f"  {name:<16} {row[0]:>5} {row[1]:>3}")
        lines += ["", "insertion by 之    no_zhi  zhi"]
        for name, row in zip(("uninserted", "inserted"), self.table2):
            lines.append(f"  {name:<16} {row[0]:>6} {row[1]:>4}")
        lines += ["", "rates"]
        lines += _columns([(k, str(r), f"{float(r.value):.1%}") for k, r in self.rates.items()], ("rate", "ratio", "%"))
        lines += ["", "discrepancies"]
        lines += _columns([(d.key, d.claimed, d.computed, "documented" if d.documented else "NEW", d.note)
                           for d in self.discrepancies], ("key", "claimed", "computed", "status", "note"))
        return "\n".join(lines)


def _columns(rows: list[tuple], header: tuple) -> list[str]:
    rows = [header, *rows]
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(header))]
    return ["  " + "  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]


def _terms(rec: CorpusRecord) -> Optional[tuple[int, int]]:
    if rec.quantity is None or rec.quantity.frac is None or not rec.quantity.frac.resolved:
        return None
    f = rec.quantity.frac
    return f.num, f.den


def stats(records: list[CorpusRecord]) -> StatsReport:
    """Tallies of the listed instances, the two cross-tables and their rates.

    Pattern counts follow the list each instance is filed under; the
    classifier's reading of the same instances is reported beside them and
    every record where the two disagree becomes a discrepancy.
    """
    exprs = [r for r in records if r.kind == "expr"]
    counts: dict[str, int] = {}
    classified: dict[str, int] = {}
    for label in ("mono", *BIDIMENSIONAL):
        counts[label] = _weight(r for r in exprs if r.inventory == label)
        classified[label] = _weight(r for r in exprs if r.inventory in ("mono", *BIDIMENSIONAL)
                                    and r.category == label)
    counts["mono_mw"] = _weight(r for r in exprs if r.inventory == "mono" and r.mw)
    classified["mono_mw"] = _weight(r for r in exprs if r.inventory == "mono" and r.category == "mono" and r.mw)
    for tally in (counts, classified):
        tally["mono_no_mw"] = tally["mono"] - tally["mono_mw"]
        for letter in "abcd":
            tally[letter] = tally[f"{letter}1"] + tally[f"{letter}2"]
        tally["bidim_unit"] = sum(tally[f"{x}1"] for x in "abcd")
        tally["bidim_nonunit"] = sum(tally[f"{x}2"] for x in "abcd")
        tally["bidim"] = tally["bidim_unit"] + tally["bidim_nonunit"]

    lexical = [r for r in exprs if r.inventory == "lexical"]
    counts["half"] = _weight(r for r in lexical if r.category == "half")
    counts["half_mw"] = _weight(r for r in lexical if r.category == "half" and r.mw)
    counts["third_lex"] = _weight(r for r in lexical if r.category == "third")
    counts["third_lex_mw"] = _weight(r for r in lexical if r.category == "third" and r.mw)
    counts["two_thirds_lex"] = _weight(r for r in lexical if r.category == "two_thirds")
    counts["two_thirds_lex_mw"] = _weight(r for r in lexical if r.category == "two_thirds" and r.mw)
    counts["total_expressions"] = (counts["mono"] + counts["bidim"] + counts["half"] + counts["third_lex"]
                                   + counts["two_thirds_lex"])

    surveyed = [r for r in exprs if r.inventory in ("mono", *BIDIMENSIONAL, "lexical", "thirds")
                and _terms(r) in ((1, 3), (2, 3))]
    table1 = [[0, 0], [0, 0]]
    for r in surveyed:
        row = 1 if r.quantity.frac.form.is_lexical else 0
        table1[row][1 if r.mw else 0] += r.count

    table2 = [[0, 0], [0, 0]]
    for r in exprs:
        if r.inventory not in BIDIMENSIONAL or r.insertion_context in (InsertionContext.UNKNOWN, None):
            continue
        table2[1 if r.insertion_context.inserted else 0][1 if r.zhi else 0] += r.count
    counts["table2_total"] = sum(map(sum, table2))
    counts["table2_row_uninserted"], counts["table2_row_inserted"] = map(sum, table2)
    counts["table2_col_no_zhi"] = table2[0][0] + table2[1][0]
    counts["table2_col_zhi"] = table2[0][1] + table2[1][1]

    ratios = {
        "rate_mono": (counts["mono"], counts["mono"] + counts["bidim_unit"]),
        "rate_zhi_given_inserted": (table2[1][1], counts["table2_row_inserted"]),
        "rate_uninserted_given_no_zhi": (table2[0][0], counts["table2_col_no_zhi"]),
        "rate_no_mw_given_regular": (table1[0][0], sum(table1[0])),
        "rate_mw_given_lexical": (table1[1][1], sum(table1[1])),
    }
    # a rate over an empty group is left out
    rates = {k: Rational(n, d) for k, (n, d) in ratios.items() if d}

    computed: dict[str, str] = {k: str(v) for k, v in counts.items()}
    computed["table1"] = str(table1)
    computed["table2"] = str(table2)
    computed.update({k: str(r) for k, r in rates.items()})
    discrepancies = []
    for key, claim in HEADLINES:
        got = computed.get(key, "n/a")
        if got != str(claim):
            discrepancies.append(Discrepancy(key, str(claim), got, DOCUMENTED.get(key, "")))
    for r in exprs:
        listed = r.inventory if r.inventory in ("mono", *BIDIMENSIONAL) else None
        if listed and r.category != listed:
            discrepancies.append(Discrepancy(f"record:{r.id}", listed, r.category, DOCUMENTED.get(f"record:{r.id}", "")))
        if r.inventory == "thirds":
            discrepancies.append(Discrepancy(f"record:{r.id}", "unlisted", r.category,
                                             DOCUMENTED.get(f"record:{r.id}", "")))
    return StatsReport(counts, classified, table1, table2, rates, discrepancies)


# --- verification ---------------------------------------------------------

@dataclass
class Check:
    id: str
    ok: bool
    detail: str = ""
    relaxed: bool = False


@dataclass
class VerifyReport:
    name: str
    checks: list[Check]

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"name": self.name, "checked": len(self.checks), "failures": len(self.failures),
                "checks": [c.__dict__ for c in self.checks]}

    def to_text(self) -> str:
        relaxed = sum(c.relaxed for c in self.checks)
        head = f"{self.name}: {len(self.checks) - len(self.failures)}/{len(self.checks)} pass ({relaxed} relaxed)"
        return "\n".join([head] + [f"  FAIL {c.id}: {c.detail}" for c in self.failures])


def _squash(text: str) -> str:
    return "".join(normalize(text).split())


def roundtrip_verify(records: list[CorpusRecord]) -> VerifyReport:
    """Each surface parses to its annotated value and renders back to itself.

    Copying errors are checked against both the literal and the corrected
    value, illegible numerators are checked on parsing only, and a tripled
    measure word passes with a warning.
    """
    checks = []
    for rec in records:
        if rec.kind != "expr":
            continue
        problems = list(rec.problems)
        relaxed = bool(rec.flags & {"copyist_error", "illegible_digits", "illegible_prefix", "mw_tripled"})
        literal = literal_reading(rec)
        expected_literal = _unresolved(rec.literal if rec.literal != "-" else rec.value)
        if literal != expected_literal:
            problems.append(f"parsed {literal!r}, expected {expected_literal!r}")
        q = rec.quantity
        if q is not None:
            if q.frac is not None and rec.zhi != q.frac.has_zhi:
                problems.append("之 annotation differs")
            if "unit_unstated" not in rec.flags and rec.mw != bool(q.frac and q.frac.mw):
                problems.append("measure word annotation differs")
            if (q.flags & PARSER_FLAGS) != (rec.flags & PARSER_FLAGS):
                problems.append(f"flags {sorted(q.flags & PARSER_FLAGS)} vs {sorted(rec.flags & PARSER_FLAGS)}")
            if "illegible_digits" not in rec.flags:
                try:
                    out = render_quantity(q)
                    if _squash(out) != _squash(rec.surface):
                        problems.append(f"renders as {out}")
                except SuanshuError as exc:
                    problems.append(f"render: {exc}")
        if "copyist_error" in rec.flags:
            problems.extend(_check_corrected(rec))
        checks.append(Check(rec.id, not problems, "; ".join(problems), relaxed))
    return VerifyReport("roundtrip", checks)


def _check_corrected(rec: CorpusRecord) -> list[str]:
    form = PatternCategory.from_label(rec.category).form if rec.category != "none" else None
    try:
        q = parse_value(rec.value, form)
        again = parse_quantity(render_quantity(q, RenderOptions(form=form)))
    except (SuanshuError, ValueError) as exc:
        return [f"corrected value: {exc}"]
    if format_value(again) != rec.value:
        return [f"corrected value reads back as {format_value(again)!r}"]
    return []


_GIVEN_REDUCE = re.compile(r"reduce (\d+/\d+) = .*")
_GIVEN_DIVIDE = re.compile(r"divide (\d+) / .*")


def verify_statements(records: list[CorpusRecord]) -> VerifyReport:
    """Evaluate each computational statement and compare it with its annotation."""
    checks = []
    carry: dict[str, Fraction] = {}
    for rec in records:
        if rec.kind != "stmt":
            continue
        try:
            stmt = parse_statement(rec.surface)
            if isinstance(stmt, Product):
                ev = evaluate_product(stmt, carry.get(rec.series))
                if rec.series != "-":
                    carry[rec.series] = product_value(stmt, carry.get(rec.series))
            elif isinstance(stmt, Reduction):
                m = _GIVEN_REDUCE.fullmatch(rec.value)
                if not m:
                    raise SuanshuError("reduction needs its operand in the value column")
                ev = evaluate_reduction(stmt, Rational.parse(m.group(1)))
            elif isinstance(stmt, Division):
                m = _GIVEN_DIVIDE.fullmatch(rec.value)
                if not m:
                    raise SuanshuError("division needs its dividend in the value column")
                ev, _ = evaluate_division(stmt, int(m.group(1)))
            else:
                ev = evaluate_share(stmt)
        except (SuanshuError, ValueError) as exc:
            checks.append(Check(rec.id, False, str(exc)))
            continue
        problems = []
        if not ev.ok:
            problems.append(f"arithmetic fails: {ev.canonical} {ev.detail}".strip())
        if ev.canonical != rec.value:
            problems.append(f"reads as {ev.canonical!r}, annotated {rec.value!r}")
        inferred = "[" in ev.canonical
        if inferred != ("inferred_operand" in rec.flags):
            problems.append("operand inference does not match annotation")
        checks.append(Check(rec.id, not problems, "; ".join(problems) or ev.detail))
    return VerifyReport("statements", checks)


@dataclass(frozen=True)
class SeriesResult:
    series: str
    denominators: tuple[int, ...]
    values: tuple[str, ...]


def resolve_series(records: list[CorpusRecord]) -> dict[str, SeriesResult]:
    """Fill elided denominators in every series and report what each received."""
    out = {}
    names = [s for s in dict.fromkeys(r.series for r in records) if s != "-"]
    for name in names:
        members = [r for r in records if r.series == name]
        exprs = [r for r in members if r.kind == "expr" and r.quantity is not None]
        if not any(r.quantity.frac is not None and r.quantity.frac.elided for r in exprs):
            continue
        divisor = None
        for r in members:
            if r.kind == "stmt":
                stmt = parse_statement(r.surface)
                if isinstance(stmt, Division):
                    divisor = stmt.divisor
        resolved = resolve_elision([r.quantity for r in exprs], divisor)
        dens = tuple(q.frac.den for q in resolved if q.frac is not None)
        out[name] = SeriesResult(name, dens, tuple(format_value(q) for q in resolved))
    return out


def verify_series(records: list[CorpusRecord]) -> VerifyReport:
    checks = []
    resolved = resolve_series(records)
    for name, result in resolved.items():
        members = [r for r in records if r.series == name and r.kind == "expr" and r.quantity is not None]
        problems = [f"{r.id} resolves to {v!r}" for r, v in zip(members, result.values) if v != r.value]
        if len(set(result.denominators)) != 1:
            problems.append(f"denominators differ: {result.denominators}")
        checks.append(Check(name, not problems, "; ".join(problems) or f"denominator {result.denominators[0]}"))
    return VerifyReport("series", checks)
