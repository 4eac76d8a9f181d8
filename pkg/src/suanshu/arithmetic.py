"""Exact operations on fractions and measures."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Union

from .core import DimensionError, Quantity, Rational, StatementError
from .metrology import Dimension, Measure, Unit, convert, dim_product

Number = Union[Rational, Fraction, int]


def _frac(x: Number) -> Fraction:
    return x.value if isinstance(x, Rational) else Fraction(x)


def reduce(r: Rational) -> Rational:
    """Lowest terms."""
    g = gcd(r.num, r.den)
    return Rational(r.num // g, r.den // g)


def halve_both(r: Rational) -> Rational:
    """Halve numerator and denominator together; both must be even."""
    if r.num % 2 or r.den % 2:
        raise ValueError(f"{r} cannot be halved term by term")
    return Rational(r.num // 2, r.den // 2)


def mul(a: Number, b: Number) -> Rational:
    """Product with terms multiplied out; reduce separately if wanted."""
    a, b = Rational.of(a), Rational.of(b)
    return Rational(a.num * b.num, a.den * b.den)


def add(*terms: Number) -> Rational:
    return Rational.of(sum((_frac(t) for t in terms), Fraction(0)))


def share(total: Number, n: int) -> Rational:
    """What each of n people receives, in lowest terms."""
    if n < 1:
        raise ValueError("need at least one share")
    return Rational.of(_frac(total) / n)


def divide_by(value: Number, n: int) -> Rational:
    """Divide keeping the divisor in the denominator (74000 / 36 stays over 36)."""
    if n < 1:
        raise ValueError("divisor must be positive")
    r = Rational.of(value)
    return Rational(r.num, r.den * n)


def to_mixed(r: Rational) -> tuple[int, Rational]:
    """Whole part and proper remainder over the same denominator."""
    whole, rest = divmod(r.num, r.den)
    return whole, Rational(rest, r.den)


def measure_of(q: Quantity) -> Union[Measure, Fraction]:
    """A quantity as a measure in its smallest unit, or a pure number when unitless."""
    unit = q.unit
    if unit is None:
        return q.magnitude()
    return Measure(q.magnitude(), unit)


def mul_quantities(a: Union[Measure, Number], b: Union[Measure, Number],
                   unit: Optional[Unit] = None) -> Union[Measure, Fraction]:
    """Multiply measures; lengths are brought to one unit first and the power adds up.

    The common unit is ``unit`` if given, else the larger of the two.
    """
    if not isinstance(a, Measure) and not isinstance(b, Measure):
        return _frac(a) * _frac(b)
    if not isinstance(a, Measure):
        return Measure(_frac(a) * b.value, b.unit, b.power)
    if not isinstance(b, Measure):
        return Measure(a.value * _frac(b), a.unit, a.power)
    dim = dim_product(a.dimension, b.dimension)
    if a.unit.family != b.unit.family:
        raise DimensionError(f"cannot multiply {a.unit.key} by {b.unit.key}")
    common = unit or max(a.unit, b.unit, key=lambda u: u.ratio)
    ca, cb = convert(a, common), convert(b, common)
    m = Measure(ca.value * cb.value, common, a.power + b.power)
    assert m.dimension is dim
    return m


@dataclass(frozen=True)
class ProductReading:
    operands: tuple[Fraction, Fraction]
    reinterpreted: Optional[int] = None


def _is_bare_integer(x) -> bool:
    if isinstance(x, Quantity):
        return x.frac is None and len(x.int_parts) == 1 and x.int_parts[0].unit is None
    if isinstance(x, Rational):
        return x.den == 1
    return isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)


def _value(x) -> Fraction:
    return x.magnitude() if isinstance(x, Quantity) else _frac(x)


def infer_product_operand(operands: Sequence, stated: Number) -> ProductReading:
    """Read a product so that it equals the stated result.

    When the literal product disagrees, a bare integer k among the operands
    is retried as 1/k.
    """
    if len(operands) != 2:
        raise ValueError("a product has two operands")
    vals = [_value(x) for x in operands]
    target = _frac(stated)
    if vals[0] * vals[1] == target:
        return ProductReading((vals[0], vals[1]))
    hits = []
    for i, x in enumerate(operands):
        if _is_bare_integer(x) and vals[i]:
            alt = list(vals)
            alt[i] = 1 / vals[i]
            if alt[0] * alt[1] == target:
                hits.append(ProductReading((alt[0], alt[1]), i))
    if len(hits) != 1:
        raise StatementError(f"{vals[0]} times {vals[1]} does not give {target} under any reading")
    return hits[0]


__all__ = ["reduce", "halve_both", "mul", "add", "share", "divide_by", "to_mixed", "measure_of",
           "mul_quantities", "infer_product_operand", "ProductReading", "Dimension"]
