"""Short computational statements: products, reductions, divisions and shares."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .arithmetic import (add, divide_by, infer_product_operand, measure_of, mul_quantities, reduce, share,
                         to_mixed)
from .codec import format_value, parse_quantity
from .core import ParseError, Quantity, Rational, StatementError
from .metrology import Measure, convert
from .numerals import parse_integer


@dataclass(frozen=True)
class Product:
    left: Optional[Quantity]
    right: Quantity
    result: Optional[Quantity]
    flags: frozenset[str] = field(default=frozenset())


@dataclass(frozen=True)
class Reduction:
    result: Quantity


@dataclass(frozen=True)
class Division:
    divisor: int


@dataclass(frozen=True)
class Share:
    people: int
    terms: tuple[Quantity, ...]
    result: Quantity


Statement = Union[Product, Reduction, Division, Share]


def _try(text: str) -> Optional[Quantity]:
    if not text:
        return None
    try:
        return parse_quantity(text)
    except (ParseError, ValueError):
        return None


def _irregularity(q: Quantity) -> int:
    return (sum(p.implicit_one for p in q.int_parts) + ("mw_omitted" in q.flags) + ("yi_ban" in q.flags)
            + 2 * ("unit_as_noun" in q.flags))


def _split_operand_result(text: str) -> tuple[Quantity, Optional[Quantity]]:
    """Split 'Y Z' into an operand and a stated result, preferring the most regular reading."""
    best = None
    for k in range(1, len(text) + 1):
        y = _try(text[:k])
        if y is None:
            continue
        rest = text[k:]
        z = _try(rest) if rest else None
        if rest and z is None:
            continue
        score = _irregularity(y)
        if z is None:
            score += 2
        else:
            score += _irregularity(z) + (z.frac is None)
        if best is None or score < best[0]:
            best = (score, y, z)
    if best is None:
        raise StatementError(f"cannot read {text!r} as an operand and a result")
    return best[1], best[2]


def parse_terms(text: str) -> list[Quantity]:
    """Read a run of quantities written one after another, longest first."""
    out = []
    i = 0
    while i < len(text):
        for j in range(len(text), i, -1):
            q = _try(text[i:j])
            if q is not None:
                out.append(q)
                i = j
                break
        else:
            raise StatementError(f"cannot read {text[i:]!r}")
    return out


_DIVISION = re.compile(r"(.+)成")
_SHARE = re.compile(r"(.+?)人分(.+)各受(.+)")


def parse_statement(text: str) -> Statement:
    """Recognize one statement; a product opening with 乘 takes its left operand from the previous one."""
    t = text.strip()
    if t.endswith("也"):
        t = t[:-1]
    if t.startswith("約之"):
        result = _try(t[2:])
        if result is None:
            raise StatementError(f"unreadable reduction result in {text!r}")
        return Reduction(result)
    m = _SHARE.fullmatch(t)
    if m:
        result = _try(m.group(3))
        if result is None:
            raise StatementError(f"unreadable share in {text!r}")
        return Share(parse_integer(m.group(1)), tuple(parse_terms(m.group(2))), result)
    m = _DIVISION.fullmatch(t)
    if m:
        return Division(parse_integer(m.group(1)))
    if "乘" in t:
        left_text, right_text = t.split("乘", 1)
        left_text = left_text.removesuffix("而")
        left = None
        if left_text:
            left = _try(left_text)
            if left is None:
                raise StatementError(f"unreadable operand {left_text!r}")
        right, result = _split_operand_result(right_text)
        flags = set()
        if left is not None and "yi_ban" in left.flags:
            flags.add("ambiguous_segmentation")
        return Product(left, right, result, frozenset(flags))
    raise StatementError(f"no statement template matches {text!r}")


@dataclass(frozen=True)
class Evaluation:
    canonical: str
    ok: bool
    detail: str = ""


def _fmt_number(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _same_amount(product, stated: Quantity) -> bool:
    """Compare a computed product with a stated result, reading the stated unit at the product's power."""
    if isinstance(product, Measure):
        if stated.unit is None:
            return product.value == stated.magnitude()
        target = convert(product, stated.unit) if stated.unit.family == product.unit.family else None
        return target is not None and target.value == stated.magnitude()
    return stated.unit is None and product == stated.magnitude()


def evaluate_product(stmt: Product, carry: Optional[Fraction] = None) -> Evaluation:
    if stmt.left is None and carry is None:
        raise StatementError("product continues a previous result that was not given")
    left_text = format_value(stmt.left) if stmt.left is not None else _fmt_number(carry)
    right_text = format_value(stmt.right)
    if stmt.result is None:
        return Evaluation(f"{left_text} * {right_text}", True, "no stated result")
    a = measure_of(stmt.left) if stmt.left is not None else carry
    b = measure_of(stmt.right)
    canonical = f"{left_text} * {right_text} = {format_value(stmt.result)}"
    if _same_amount(mul_quantities(a, b), stmt.result):
        return Evaluation(canonical, True)
    left = stmt.left if stmt.left is not None else carry
    try:
        reading = infer_product_operand((left, stmt.right), stmt.result.magnitude())
    except StatementError as exc:
        return Evaluation(canonical, False, str(exc))
    texts = [left_text, right_text]
    i = reading.reinterpreted
    texts[i] = f"[{_fmt_number(reading.operands[i])}]"
    return Evaluation(f"{texts[0]} * {texts[1]} = {format_value(stmt.result)}", True,
                      f"operand {i + 1} read as its reciprocal")


def product_value(stmt: Product, carry: Optional[Fraction] = None) -> Fraction:
    """The stated result of a product, for carrying into the next statement."""
    if stmt.result is None:
        left = stmt.left.magnitude() if stmt.left is not None else carry
        return left * stmt.right.magnitude()
    return stmt.result.magnitude()


def evaluate_reduction(stmt: Reduction, given: Rational) -> Evaluation:
    got = reduce(given)
    stated = stmt.result.frac.value if stmt.result.frac else Rational(stmt.result.integer, 1)
    ok = (got.num, got.den) == (stated.num, stated.den)
    return Evaluation(f"reduce {given} = {format_value(stmt.result)}", ok)


def evaluate_division(stmt: Division, dividend: int) -> tuple[Evaluation, Rational]:
    r = divide_by(dividend, stmt.divisor)
    whole, rest = to_mixed(r)
    return Evaluation(f"divide {dividend} / {stmt.divisor} = {whole} + {rest}", True), rest


def evaluate_share(stmt: Share) -> Evaluation:
    total = add(*(q.magnitude() for q in stmt.terms))
    got = share(total, stmt.people)
    terms = " + ".join(format_value(q) for q in stmt.terms)
    ok = got.value == stmt.result.magnitude()
    return Evaluation(f"share ({terms}) / {stmt.people} = {format_value(stmt.result)}", ok)
