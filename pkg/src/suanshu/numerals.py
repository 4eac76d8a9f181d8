"""Integers written with digits and the pivots 十 百 千 萬."""

from __future__ import annotations

import logging

from .core import (DIGIT_GLYPHS, PIVOTS, SEVENTY, LigatureStyle, ParseError, Token, TokenKind,
                   ligature_table, tokenize)

log = logging.getLogger(__name__)

MAX_INTEGER = 10**8 - 1
LIGATURE_DIGITS = (2, 3, 4, 7)
_BLOCK_PIVOTS = (("千", 1000), ("百", 100), ("十", 10))


def _ligature_glyph(tens: int, seventy: str) -> str:
    return {v: k for k, v in ligature_table(seventy).items()}[tens]


def _block(n: int, omit_top_one: bool, style: LigatureStyle, seventy: str) -> str:
    out = []
    first = True
    for glyph, p in _BLOCK_PIVOTS:
        d = n // p % 10
        if not d:
            continue
        if p == 10 and style is LigatureStyle.MANUSCRIPT and d in LIGATURE_DIGITS:
            out.append(_ligature_glyph(d, seventy))
        elif d == 1 and first and omit_top_one:
            out.append(glyph)
        else:
            out.append(DIGIT_GLYPHS[d] + glyph)
        first = False
    if n % 10:
        out.append(DIGIT_GLYPHS[n % 10])
    return "".join(out)


def render_integer(n: int, style: LigatureStyle = LigatureStyle.MANUSCRIPT, seventy: str = SEVENTY) -> str:
    """Write n positionally; a coefficient of one is dropped only before the leading pivot."""
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError("expected an int")
    if not 1 <= n <= MAX_INTEGER:
        raise ValueError(f"{n} is outside 1..{MAX_INTEGER}")
    hi, lo = divmod(n, 10_000)
    if not hi:
        return _block(lo, True, style, seventy)
    head = "" if hi == 1 else _block(hi, True, style, seventy)
    tail = _block(lo, False, style, seventy) if lo else ""
    return head + "萬" + tail


def _expand(tokens: list[Token]) -> list[tuple[str, int]]:
    out = []
    for t in tokens:
        if t.kind is TokenKind.LIGATURE:
            out.append(("digit", t.value // 10))
            out.append(("pivot", 10))
        elif t.kind is TokenKind.DIGIT:
            out.append(("digit", t.value))
        elif t.kind is TokenKind.PIVOT:
            out.append(("pivot", t.value))
        else:
            raise ParseError(f"{t.text!r} is not part of a numeral", t.pos)
    return out


def _parse_block(items: list[tuple[str, int]], leading_bare: bool) -> tuple[int, bool]:
    value = 0
    bound = 10_000
    lenient = False
    i = 0
    while i < len(items):
        kind, v = items[i]
        if kind == "digit":
            if i + 1 < len(items) and items[i + 1][0] == "pivot":
                p = items[i + 1][1]
                if p >= bound:
                    raise ParseError("pivots out of order")
                if v == 1 and i == 0 and leading_bare:
                    lenient = True
                value += v * p
                bound = p
                i += 2
            elif i == len(items) - 1:
                value += v
                i += 1
            else:
                raise ParseError("two digits in a row")
        else:
            if i != 0 or not leading_bare:
                raise ParseError("a lower pivot needs an explicit coefficient")
            if v >= bound:
                raise ParseError("pivots out of order")
            value += v
            bound = v
            i += 1
    if not value:
        raise ParseError("empty numeral")
    return value, lenient


def parse_numeral_tokens(tokens: list[Token]) -> tuple[int, bool]:
    """Value of a numeral token run and whether it wrote 一 before its leading pivot."""
    items = _expand(tokens)
    if not items:
        raise ParseError("empty numeral")
    wan = [i for i, (k, v) in enumerate(items) if k == "pivot" and v == 10_000]
    if len(wan) > 1:
        raise ParseError("萬 may appear only once")
    if not wan:
        return _parse_block(items, True)
    w = wan[0]
    if w == 0:
        hi, lenient = 1, False
    else:
        hi, lenient = _parse_block(items[:w], True)
    lo = 0
    if w + 1 < len(items):
        lo, _ = _parse_block(items[w + 1:], False)
    return hi * 10_000 + lo, lenient


def parse_integer(text: str, seventy: str = SEVENTY) -> int:
    """Read an integer; 一 before the leading pivot is accepted with a warning."""
    tokens = tokenize(text.strip(), seventy=seventy)
    if not tokens:
        raise ParseError("empty numeral")
    value, lenient = parse_numeral_tokens(tokens)
    if lenient:
        log.warning("explicit 一 before the leading pivot in %r", text)
    return value


NUMERAL_KINDS = (TokenKind.DIGIT, TokenKind.PIVOT, TokenKind.LIGATURE)


def read_numeral(tokens: list[Token], start: int) -> tuple[int, int, bool] | None:
    """Longest valid numeral starting at ``start``: (value, end index, lenient)."""
    end = start
    while end < len(tokens) and tokens[end].kind in NUMERAL_KINDS:
        end += 1
    for stop in range(end, start, -1):
        try:
            value, lenient = parse_numeral_tokens(tokens[start:stop])
        except ParseError:
            continue
        return value, stop, lenient
    return None


def uses_ligature_style(text: str, seventy: str = SEVENTY) -> LigatureStyle | None:
    """Which style a text was written in, if it has any tens digit that could tell."""
    if any(ch in ligature_table(seventy) for ch in text):
        return LigatureStyle.MANUSCRIPT
    for d in LIGATURE_DIGITS:
        if DIGIT_GLYPHS[d] + "十" in text:
            return LigatureStyle.PLAIN
    return None


__all__ = ["render_integer", "parse_integer", "read_numeral", "parse_numeral_tokens",
           "uses_ligature_style", "MAX_INTEGER", "PIVOTS"]
