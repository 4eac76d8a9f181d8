"""Reading and writing quantities: mixed numbers, fractions, units and nouns."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .core import (SEVENTY, FracPart, FractionForm, ImproperFractionError, InsertionContext, IntPart,
                   LEXICAL_VALUES, LigatureStyle, ParseError, PatternCategory, Policy, Quantity, Rational,
                   RenderError, Token, TokenKind, tokenize)
from .metrology import Dimension, Unit, UnitRegistry, default_registry, noun_lexicon
from .numerals import read_numeral, render_integer, uses_ligature_style

log = logging.getLogger(__name__)

LEX_TOKENS = {
    TokenKind.BAN: FractionForm.LEX_HALF,
    TokenKind.SHAOBAN: FractionForm.LEX_THIRD,
    TokenKind.TAIBAN: FractionForm.LEX_TWO_THIRDS,
}
LEX_GLYPHS = {
    FractionForm.LEX_HALF: "半",
    FractionForm.LEX_THIRD: "少半",
    FractionForm.LEX_TWO_THIRDS: "大半",
}


def select_form(value: Rational, unit: Optional[Unit], insertion: InsertionContext) -> FractionForm:
    """The form a scribe would most likely use for a fraction in a given setting."""
    terms = (value.num, value.den)
    if terms == (1, 2):
        return FractionForm.LEX_HALF
    inserted = insertion.inserted
    if terms in ((1, 3), (2, 3)):
        if unit is not None:
            return FractionForm.LEX_THIRD if terms == (1, 3) else FractionForm.LEX_TWO_THIRDS
        if inserted:
            return FractionForm.C
        return FractionForm.MONO if value.num == 1 else FractionForm.A
    if value.num == 1 and unit is None and not inserted:
        return FractionForm.MONO
    if inserted:
        return FractionForm.D if unit is not None else FractionForm.C
    return FractionForm.B if unit is not None else FractionForm.A


@dataclass(frozen=True)
class RenderOptions:
    form: Optional[FractionForm] = None
    zhi: Policy = Policy.AUTO
    you: Policy = Policy.AUTO
    ligatures: LigatureStyle = LigatureStyle.MANUSCRIPT
    insertion: InsertionContext = InsertionContext.UNINSERTED
    seventy: str = SEVENTY

    def __post_init__(self):
        if self.zhi is Policy.FORCE and self.form is not None and (
                self.form is FractionForm.MONO or self.form.is_lexical):
            raise ValueError(f"之 cannot be forced on form {self.form.value}")

    def resolve_form(self, value: Rational, unit: Optional[Unit]) -> FractionForm:
        form = self.form or select_form(value, unit, self.insertion)
        if self.zhi is Policy.FORCE:
            if form is FractionForm.MONO or form.is_lexical:
                raise ValueError(f"之 cannot be forced on form {form.value}")
            form = {FractionForm.A: FractionForm.C, FractionForm.B: FractionForm.D}.get(form, form)
        elif self.zhi is Policy.SUPPRESS:
            form = {FractionForm.C: FractionForm.A, FractionForm.D: FractionForm.B}.get(form, form)
        return form


def _glyph(canonical: str, unit: Optional[Unit], spelling: frozenset[str]) -> str:
    if unit is not None:
        for g in (*unit.aliases, "朱" if unit.glyph == "銖" else None):
            if g and g in spelling:
                return g
    return canonical


def unit_glyph(unit: Unit, spelling: frozenset[str] = frozenset()) -> str:
    return _glyph(unit.glyph, unit, spelling)


def _numeral(n: int, opts: RenderOptions) -> str:
    return render_integer(n, opts.ligatures, opts.seventy)


def render_fraction(value: Rational, unit: Optional[Unit] = None, opts: RenderOptions = RenderOptions(),
                    spelling: frozenset[str] = frozenset()) -> str:
    """Write a proper fraction; the measure word appears only in forms that carry one."""
    if not value.is_proper():
        raise RenderError(f"{value} is not a proper fraction")
    if value.num == 0:
        raise RenderError("zero has no fraction form")
    form = opts.resolve_form(value, unit)
    return _render_frac_form(value, unit, form, opts, spelling)


def _render_frac_form(value: Rational, unit: Optional[Unit], form: FractionForm, opts: RenderOptions,
                      spelling: frozenset[str]) -> str:
    mw = unit_glyph(unit, spelling) if unit is not None else ""
    if form.is_lexical:
        if (value.num, value.den) != LEXICAL_VALUES[form]:
            raise RenderError(f"{value} cannot be written as {LEX_GLYPHS[form]}")
        word = LEX_GLYPHS[form]
        if form is FractionForm.LEX_TWO_THIRDS and "泰半" in spelling:
            word = "泰半"
        return word + mw
    den = _numeral(value.den, opts)
    if form is FractionForm.MONO:
        if value.num != 1:
            raise RenderError(f"{value} is not a unit fraction")
        return den + "分" + mw
    if form.has_mw and unit is None:
        raise RenderError(f"form {form.value} needs a unit")
    num = _numeral(value.num, opts)
    written = mw if form.has_mw else ""
    zhi = "之" if form.has_zhi else ""
    return den + "分" + written + zhi + num


def _linker(opts: RenderOptions, spelling: frozenset[str]) -> str:
    if "又" in spelling:
        return "又"
    if "有" in spelling:
        return "有"
    return "有" if opts.ligatures is LigatureStyle.MANUSCRIPT else "又"


def faithful_options(q: Quantity) -> RenderOptions:
    form = q.frac.form if q.frac is not None else None
    return RenderOptions(form=form, you=Policy.FORCE if q.linker_you else Policy.SUPPRESS,
                         ligatures=q.ligatures or LigatureStyle.MANUSCRIPT)


def render_quantity(q: Quantity, opts: Optional[RenderOptions] = None) -> str:
    """Write a quantity.

    Without options the quantity is written back the way it was read: same
    form, linker, spelling and copying quirks. With options the form, 之 and
    又 policies apply to the value instead.
    """
    faithful = opts is None
    if faithful:
        opts = faithful_options(q)
    spelling = q.spelling if faithful else frozenset()
    out = ["□" if faithful and "illegible_prefix" in q.flags else "", q.noun or ""]
    ints = []
    for p in q.int_parts:
        mw = unit_glyph(p.unit, spelling) if p.unit is not None else ""
        ints.append(mw if p.implicit_one else _numeral(p.coef, opts) + mw)
    out.extend(ints)
    if q.frac is None:
        return "".join(out)

    frac = q.frac
    if frac.num is None:
        raise RenderError("cannot write an illegible numerator")
    if faithful and frac.elided:
        text = _render_elided(frac, opts)
        form = frac.form
    else:
        if frac.den == 0:
            raise RenderError("unresolved elided denominator")
        form = frac.form if faithful else opts.resolve_form(frac.value, frac.unit)
        # one-part and lexical forms write the unit only when it was written
        shown = frac.unit if (not faithful or frac.mw or form.is_bidimensional) else None
        text = _render_frac_form(frac.value, shown, form, opts, spelling)
        if faithful and "yi_ban" in q.flags and not q.int_parts:
            text = "一" + text
        if faithful and "mw_tripled" in q.flags and frac.unit is not None:
            text += unit_glyph(frac.unit, spelling)

    bare_int = bool(q.int_parts) and q.int_parts[-1].unit is None
    if opts.you is Policy.FORCE:
        use_you = True
    elif opts.you is Policy.SUPPRESS:
        use_you = False
    else:
        use_you = bool(q.int_parts) and (form.has_zhi or bare_int)
    if use_you and q.int_parts:
        out.append(_linker(opts, spelling))
    elif bare_int and _runs_together(ints[-1], text, opts):
        if not faithful:
            raise RenderError("integer and fraction would read as one numeral without 又")
        out.append(" ")
    out.append(text)
    return "".join(out)


def _runs_together(int_text: str, frac_text: str, opts: RenderOptions) -> bool:
    if int_text == render_integer(1, opts.ligatures, opts.seventy) and frac_text[:1] == "半":
        return True
    head = tokenize(int_text, seventy=opts.seventy)
    both = tokenize(int_text + frac_text, seventy=opts.seventy)
    got = read_numeral(both, 0)
    return got is not None and got[1] > len(head)


def _render_elided(frac: FracPart, opts: RenderOptions) -> str:
    num = _numeral(frac.num, opts)
    if frac.fen_final:
        return num + "分"
    if frac.stray is not None:
        return _numeral(frac.stray, opts) + "分" + num
    return "分" + num


class _Reader:
    """Recursive-descent reader over the token stream of one quantity."""

    def __init__(self, tokens: list[Token], series: bool):
        self.tokens = tokens
        self.series = series
        self.i = 0
        self.flags: set[str] = set()
        self.spelling: set[str] = set()

    def peek(self, k: int = 0) -> Optional[Token]:
        j = self.i + k
        return self.tokens[j] if j < len(self.tokens) else None

    def at(self, *kinds: TokenKind, k: int = 0) -> bool:
        t = self.peek(k)
        return t is not None and t.kind in kinds

    def numeral(self) -> Optional[int]:
        got = read_numeral(self.tokens, self.i)
        if got is None:
            return None
        value, end, lenient = got
        if lenient:
            self.flags.add("lenient_yi")
            log.warning("explicit 一 before the leading pivot")
        self.i = end
        return value

    def skip_boundaries(self):
        while self.at(TokenKind.BOUNDARY):
            self.i += 1

    def unit(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        if len(t.units) == 1 and t.text != t.units[0].glyph:
            self.spelling.add(t.text)
        return t


_NUMERAL = (TokenKind.DIGIT, TokenKind.PIVOT, TokenKind.LIGATURE)


def parse_quantity(text: str, *, series: bool = False, dimension: Optional[Dimension] = None,
                   registry: Optional[UnitRegistry] = None, seventy: str = SEVENTY) -> Quantity:
    """Read a noun-qualified mixed number.

    ``series`` enables the abbreviated fraction readings found in lists that
    share one denominator: a bare 分 before the numerator, a numerator ending
    in 分, and a leading numeral that cannot be the denominator. ``dimension``
    settles 石 when nothing in the text does.
    """
    registry = registry or default_registry()
    tokens = [t for t in tokenize(text.strip(), registry, seventy)]
    if not tokens:
        raise ParseError("empty input")
    try:
        return _parse(tokens, text, series, dimension, registry, noun_unit=False)
    except ImproperFractionError:
        raise
    except ParseError as first:
        if tokens[0].kind is TokenKind.UNIT:
            try:
                return _parse(tokens, text, series, dimension, registry, noun_unit=True)
            except ParseError:
                pass
        raise first


def _parse(tokens, text, series, dimension, registry, noun_unit) -> Quantity:
    r = _Reader(tokens, series)
    flags = r.flags
    if r.at(TokenKind.ILLEGIBLE):
        flags.add("illegible_prefix")
        while r.at(TokenKind.ILLEGIBLE):
            r.i += 1
    noun_tokens = []
    while r.at(TokenKind.GLYPH) or (noun_unit and not noun_tokens and r.at(TokenKind.UNIT)):
        noun_tokens.append(r.tokens[r.i])
        r.i += 1
    noun = "".join(t.text for t in noun_tokens) or None
    if noun_unit:
        flags.add("unit_as_noun")
    r.skip_boundaries()

    # integer parts: (numeral unit)+, a leading bare unit for an implicit one, or one bare numeral
    parts: list[tuple[int, Optional[Token], bool]] = []
    lex_after_one = False
    if r.at(TokenKind.UNIT) and (r.at(*_NUMERAL, k=1) or r.peek(1) is None):
        parts.append((1, r.unit(), True))
    while r.at(*_NUMERAL):
        start = r.i
        value = r.numeral()
        if value is None:
            raise ParseError("malformed numeral", r.tokens[start].pos)
        if r.at(TokenKind.UNIT):
            parts.append((value, r.unit(), False))
            continue
        if r.at(TokenKind.FEN):
            r.i = start
            break
        if any(u is None for _, u, _ in parts) or (parts and r.peek() is None):
            raise ParseError("a unitless numeral may only stand alone", r.tokens[start].pos)
        if parts:
            # a trailing unitless numeral after a unit can only open a fraction
            if r.at(*_NUMERAL) or r.at(TokenKind.BOUNDARY):
                r.i = start
                break
            raise ParseError("unitless numeral after a unit", r.tokens[start].pos)
        if value == 1 and r.at(*LEX_TOKENS) and not noun and r.i - start == 1:
            flags.add("yi_ban")
            lex_after_one = True
            break
        parts.append((value, None, False))
        r.skip_boundaries()
        if not (r.at(*_NUMERAL) or r.at(TokenKind.YOU) or r.at(*LEX_TOKENS) or r.at(TokenKind.FEN)
                or r.at(TokenKind.ILLEGIBLE) or r.peek() is None):
            raise ParseError("unexpected material after a numeral", r.peek().pos)
        break

    linker = False
    if r.at(TokenKind.YOU):
        if not parts:
            raise ParseError("又 without an integer part", r.peek().pos)
        r.spelling.add(r.peek().text)
        r.i += 1
        linker = True

    frac_spec = _read_fraction(r) if r.peek() is not None else None
    if r.peek() is not None:
        raise ParseError(f"unexpected {r.peek().text!r}", r.peek().pos)
    if linker and frac_spec is None:
        raise ParseError("又 must be followed by a fraction")
    if lex_after_one and frac_spec is None:
        raise ParseError("dangling 一")

    units = _resolve_units([u for _, u, _ in parts] + ([frac_spec["unit"]] if frac_spec else []),
                           noun, dimension, registry)
    int_units, frac_unit = units[:len(parts)], (units[len(parts)] if frac_spec else None)
    int_parts = tuple(IntPart(v, u, implicit) for (v, _, implicit), u in zip(parts, int_units))
    if int_parts and all(p.unit is None for p in int_parts) and len(int_parts) > 1:
        raise ParseError("several unitless integers")

    frac = None
    if frac_spec is not None:
        mw = frac_unit is not None
        unit = frac_unit
        if unit is None and int_parts and int_parts[-1].unit is not None:
            unit = int_parts[-1].unit
            flags.add("mw_omitted")
        if unit is None and not int_parts and noun in noun_lexicon() and noun_lexicon()[noun].unit_hint:
            flags.add("mw_omitted")
        if frac_spec["tripled"]:
            if not mw or frac_spec["tripled"].text not in (frac_spec["unit"].text,):
                raise ParseError("measure word after the numerator does not repeat the one after 分")
            flags.add("mw_tripled")
            log.warning("measure word written a third time after the numerator")
        num, den = frac_spec["num"], frac_spec["den"]
        if frac_spec["illegible"]:
            flags.add("illegible_digits")
        stray = None
        elided = frac_spec["elided"]
        if num is not None and den and num >= den:
            if not series:
                partial = Quantity(int_parts, None, noun) if int_parts else None
                err = ImproperFractionError(num, den, partial)
                err.unit = unit
                raise err
            stray, den, elided = den, 0, True
            flags.add("stray_numeral")
        if elided:
            flags.add("elided_den")
        form = frac_spec["form"]
        if form is FractionForm.A and mw:
            form = FractionForm.B
        if form is FractionForm.C and mw:
            form = FractionForm.D
        frac = FracPart(num, den, unit, form, mw=mw and form in (FractionForm.MONO, *LEX_TOKENS.values(),
                                                                   FractionForm.B, FractionForm.D),
                        elided=elided, stray=stray, fen_final=frac_spec["fen_final"],
                        illegible_low=frac_spec["low"])
    if frac is None and not int_parts:
        raise ParseError("no numeral found")
    spelling = frozenset(r.spelling)
    return Quantity(int_parts, frac, noun, linker, frozenset(flags), spelling, uses_ligature_style(text))


def _read_fraction(r: _Reader) -> Optional[dict]:
    spec = dict(num=None, den=0, unit=None, form=FractionForm.A, elided=False, fen_final=False,
                tripled=None, illegible=False, low=None)
    t = r.peek()
    if t.kind in LEX_TOKENS:
        r.i += 1
        form = LEX_TOKENS[t.kind]
        if t.kind is TokenKind.TAIBAN:
            r.spelling.add(t.text)
        spec.update(form=form, num=LEXICAL_VALUES[form][0], den=LEXICAL_VALUES[form][1])
        if r.at(TokenKind.UNIT):
            spec["unit"] = r.unit()
        return spec
    if t.kind is TokenKind.FEN:
        r.i += 1
        num = r.numeral()
        if num is None:
            raise ParseError("分 without numbers", t.pos)
        spec.update(num=num, elided=True)
        return spec
    start = r.i
    den = r.numeral()
    if den is None:
        return None
    if not r.at(TokenKind.FEN):
        raise ParseError("numeral without a unit or 分", r.tokens[start].pos)
    r.i += 1
    if r.at(TokenKind.UNIT):
        spec["unit"] = r.unit()
    zhi = False
    if r.at(TokenKind.ZHI):
        zhi = True
        r.i += 1
    if r.at(TokenKind.ILLEGIBLE):
        while r.at(TokenKind.ILLEGIBLE):
            r.i += 1
        spec.update(den=den, illegible=True, form=FractionForm.C if zhi else FractionForm.A)
        return spec
    num_start = r.i
    num = r.numeral() if r.at(*_NUMERAL) else None
    if num is None:
        if zhi:
            raise ParseError("之 without a numerator", r.tokens[num_start - 1].pos)
        if r.series and spec["unit"] is None and r.peek() is None:
            spec.update(num=den, elided=True, fen_final=True)
            return spec
        spec.update(num=1, den=den, form=FractionForm.MONO)
        return spec
    spec.update(num=num, den=den, form=FractionForm.C if zhi else FractionForm.A)
    if r.at(TokenKind.ILLEGIBLE):
        while r.at(TokenKind.ILLEGIBLE):
            r.i += 1
        spec.update(num=None, illegible=True, low=num)
    if r.at(TokenKind.UNIT) and spec["unit"] is not None:
        spec["tripled"] = r.unit()
    return spec


def _resolve_units(tokens: Sequence[Optional[Token]], noun: Optional[str], dimension: Optional[Dimension],
                   registry: UnitRegistry) -> list[Optional[Unit]]:
    """Pick one unit per token; a glyph shared by several dimensions is settled by context."""
    known = {t.units[0].dimension for t in tokens if t is not None and len(t.units) == 1}
    lexeme = noun_lexicon().get(noun or "")
    if lexeme is None and noun:
        lexeme = next((n for g, n in noun_lexicon().items() if noun.endswith(g) and n.grain), None)
    out = []
    for t in tokens:
        if t is None:
            out.append(None)
        elif len(t.units) == 1:
            out.append(t.units[0])
        else:
            choice = None
            wanted = [dimension] if dimension else []
            if lexeme is not None and lexeme.grain:
                wanted.append(Dimension.CAPACITY)
            wanted.extend(known)
            for dim in wanted:
                hits = [u for u in t.units if u.dimension is dim]
                if hits:
                    choice = hits[0]
                    break
            out.append(choice or registry.placeholder(t.text))
    return out


def classify(q: Quantity) -> Optional[PatternCategory]:
    """Pattern category of the fraction in q, or None for a plain integer."""
    if q.frac is None:
        return None
    f = q.frac
    return PatternCategory(f.form, f.num == 1 if f.form.is_bidimensional else f.form is not FractionForm.LEX_TWO_THIRDS)


def resolve_elision(seq: Sequence[Quantity], divisor: Optional[int] = None) -> list[Quantity]:
    """Fill elided denominators from the latest stated one, or from ``divisor``."""
    current = divisor
    out = []
    for q in seq:
        f = q.frac
        if f is None:
            out.append(q)
            continue
        if not f.elided:
            current = f.den
            out.append(q)
            continue
        den = f.den or current
        if not den:
            raise ParseError("elided denominator with nothing to supply it")
        if f.num >= den:
            raise ImproperFractionError(f.num, den, q)
        out.append(q.with_frac(replace(f, den=den)))
    return out


# Canonical value strings, one per quantity, used by the corpus and the command line.

def format_frac(f: FracPart) -> str:
    if f.num is not None:
        num = str(f.num)
    elif f.illegible_low is not None:
        num = f"{f.illegible_low}+?"
    else:
        num = "?"
    if f.den == 0:
        den = "_"
    elif f.elided:
        den = f"[{f.den}]"
    else:
        den = str(f.den)
    unit = f" {f.unit.key}" if f.unit is not None else ""
    return f"{num}/{den}{unit}"


def format_value(q: Quantity) -> str:
    terms = []
    for p in q.int_parts:
        if p.implicit_one:
            terms.append(f"(1) {p.unit.key}")
        else:
            terms.append(f"{p.coef} {p.unit.key}" if p.unit is not None else str(p.coef))
    if q.frac is not None:
        terms.append(format_frac(q.frac))
    body = " + ".join(terms)
    return f"{q.noun} | {body}" if q.noun else body


_TERM_INT = re.compile(r"(\d+)(?: (\S+))?")
_TERM_IMPLICIT = re.compile(r"\(1\) (\S+)")
_TERM_FRAC = re.compile(r"(\d+|\?|\d+\+\?)/(\d+|_|\[\d+\])(?: (\S+))?")


def parse_value(text: str, form: Optional[FractionForm] = None, *, insertion: InsertionContext =
                InsertionContext.UNINSERTED, registry: Optional[UnitRegistry] = None) -> Quantity:
    """Build a quantity from its canonical value string, e.g. ``'米 | 6 sheng + 1/4 sheng'``.

    The value string carries no form; ``form`` picks one, otherwise the
    usual form for the value and unit is chosen.
    """
    registry = registry or default_registry()
    noun = None
    if " | " in text:
        noun, text = text.split(" | ", 1)
    terms = [t.strip() for t in text.split(" + ")]
    parts = []
    frac = None
    for i, term in enumerate(terms):
        m = _TERM_FRAC.fullmatch(term)
        if m:
            if i != len(terms) - 1:
                raise ParseError(f"fraction must come last: {term!r}")
            frac = _frac_from_value(m, form, insertion, registry, parts)
            continue
        m = _TERM_IMPLICIT.fullmatch(term)
        if m:
            parts.append(IntPart(1, registry.get(m.group(1)), True))
            continue
        m = _TERM_INT.fullmatch(term)
        if not m:
            raise ParseError(f"unreadable term {term!r}")
        unit = registry.get(m.group(2)) if m.group(2) else None
        parts.append(IntPart(int(m.group(1)), unit))
    linker = frac is not None and bool(parts) and frac.form.has_zhi
    return Quantity(tuple(parts), frac, noun, linker)


def _frac_from_value(m, form, insertion, registry, parts) -> FracPart:
    num_text, den_text, unit_key = m.groups()
    unit = registry.get(unit_key) if unit_key else None
    low = None
    if num_text == "?":
        num = None
    elif num_text.endswith("+?"):
        num, low = None, int(num_text[:-2])
    else:
        num = int(num_text)
    elided = not den_text.isdigit()
    den = 0 if den_text == "_" else int(den_text.strip("[]"))
    if elided:
        return FracPart(num, den, unit, FractionForm.A, elided=True)
    if form is None:
        if num is None:
            form = FractionForm.D if unit is not None else FractionForm.C
        else:
            inherited = bool(parts) and parts[-1].unit == unit and unit is not None
            form = select_form(Rational(num, den), unit, insertion)
            if inherited and form is FractionForm.MONO:
                form = FractionForm.B
    mw = form.has_mw or (unit is not None and (form is FractionForm.MONO or form.is_lexical))
    return FracPart(num, den, unit, form, mw=mw, illegible_low=low)
