"""Shared value types, glyph normalization and tokenization."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from .metrology import Unit, UnitRegistry


class SuanshuError(Exception):
    pass


class ParseError(SuanshuError, ValueError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)
        self.position = position


class ImproperFractionError(ParseError):
    """A stated fraction whose numerator is not below its denominator."""

    def __init__(self, num: int, den: int, partial: "Quantity | None" = None):
        super().__init__(f"improper fraction {num}/{den}")
        self.num = num
        self.den = den
        self.partial = partial


class DimensionError(SuanshuError, ValueError):
    pass


class AmbiguousUnitError(DimensionError):
    pass


class RenderError(SuanshuError, ValueError):
    pass


class StatementError(SuanshuError, ValueError):
    pass


@dataclass(frozen=True)
class Rational:
    """An exact fraction that keeps the terms it was written with.

    ``Rational(12, 18)`` and ``Rational(2, 3)`` are different objects with the
    same ``value``; reduction only happens when asked for.
    """

    num: int
    den: int

    def __post_init__(self):
        if isinstance(self.num, bool) or not isinstance(self.num, int):
            raise TypeError("numerator must be an int")
        if isinstance(self.den, bool) or not isinstance(self.den, int):
            raise TypeError("denominator must be an int")
        if self.den < 1:
            raise ValueError(f"denominator must be positive, got {self.den}")
        if self.num < 0:
            raise ValueError(f"numerator must be non-negative, got {self.num}")

    @classmethod
    def of(cls, x: "Rational | Fraction | int") -> "Rational":
        if isinstance(x, Rational):
            return x
        f = Fraction(x)
        return cls(f.numerator, f.denominator)

    @classmethod
    def parse(cls, text: str) -> "Rational":
        num, sep, den = text.strip().partition("/")
        return cls(int(num), int(den) if sep else 1)

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    def is_proper(self) -> bool:
        return self.num < self.den

    def is_unit(self) -> bool:
        return self.num == 1

    def reduced(self) -> "Rational":
        return Rational.of(self.value)

    def same_value(self, other: "Rational | Fraction | int") -> bool:
        return self.value == Rational.of(other).value

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


class FractionForm(enum.Enum):
    MONO = "mono"
    A = "a"
    B = "b"
    C = "c"
    D = "d"
    LEX_HALF = "half"
    LEX_THIRD = "third"
    LEX_TWO_THIRDS = "two_thirds"

    @property
    def is_lexical(self) -> bool:
        return self in LEXICAL_FORMS

    @property
    def has_zhi(self) -> bool:
        return self in (FractionForm.C, FractionForm.D)

    @property
    def has_mw(self) -> bool:
        """Whether the form writes a measure word right after 分."""
        return self in (FractionForm.B, FractionForm.D)

    @property
    def is_bidimensional(self) -> bool:
        return self in (FractionForm.A, FractionForm.B, FractionForm.C, FractionForm.D)


LEXICAL_FORMS = (FractionForm.LEX_HALF, FractionForm.LEX_THIRD, FractionForm.LEX_TWO_THIRDS)
LEXICAL_VALUES = {
    FractionForm.LEX_HALF: (1, 2),
    FractionForm.LEX_THIRD: (1, 3),
    FractionForm.LEX_TWO_THIRDS: (2, 3),
}


@dataclass(frozen=True)
class PatternCategory:
    form: FractionForm
    unit_fraction: bool = False

    @property
    def label(self) -> str:
        if self.form.is_bidimensional:
            return f"{self.form.value}{1 if self.unit_fraction else 2}"
        return self.form.value

    @classmethod
    def from_label(cls, label: str) -> "PatternCategory":
        if len(label) == 2 and label[0] in "abcd" and label[1] in "12":
            return cls(FractionForm(label[0]), label[1] == "1")
        form = FractionForm(label)
        if form.is_bidimensional:
            raise ValueError(f"bidimensional category needs a 1/2 suffix: {label!r}")
        return cls(form, form in (FractionForm.MONO, FractionForm.LEX_HALF, FractionForm.LEX_THIRD))

    def __str__(self) -> str:
        return self.label


class InsertionContext(enum.Enum):
    UNINSERTED = "uninserted"
    PREDICATE = "predicate"
    OBJECT = "object"
    UNKNOWN = "unknown"

    @property
    def inserted(self) -> bool:
        return self in (InsertionContext.PREDICATE, InsertionContext.OBJECT)


class Policy(enum.Enum):
    AUTO = "auto"
    FORCE = "force"
    SUPPRESS = "suppress"


class LigatureStyle(enum.Enum):
    MANUSCRIPT = "manuscript"
    PLAIN = "plain"


@dataclass(frozen=True)
class IntPart:
    coef: int
    unit: Optional["Unit"] = None
    implicit_one: bool = False

    def __post_init__(self):
        if self.coef < 1:
            raise ValueError("integer part coefficient must be at least 1")
        if self.implicit_one and (self.coef != 1 or self.unit is None):
            raise ValueError("an implicit one needs coefficient 1 and a unit")


@dataclass(frozen=True)
class FracPart:
    """The fractional part of a quantity.

    ``num`` is None when the numerator is illegible; ``illegible_low`` then
    holds whatever leading digits survive. An elided denominator is stored as
    ``den == 0`` until a series supplies it; ``elided`` stays set afterwards.
    ``mw`` records whether the measure word is written; ``unit`` may also be
    inherited from the integer part when it is not.
    """

    num: Optional[int]
    den: int
    unit: Optional["Unit"] = None
    form: FractionForm = FractionForm.A
    mw: bool = False
    elided: bool = False
    stray: Optional[int] = field(default=None, compare=False)
    fen_final: bool = field(default=False, compare=False)
    illegible_low: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        if self.form.is_lexical:
            expected = LEXICAL_VALUES[self.form]
            if (self.num, self.den) != expected:
                raise ValueError(f"{self.form.name} must be {expected[0]}/{expected[1]}")
        if self.form.has_mw:
            object.__setattr__(self, "mw", True)
        elif self.form in (FractionForm.A, FractionForm.C) and self.mw:
            raise ValueError(f"form {self.form.value} writes no measure word")
        if self.mw and self.unit is None:
            raise ValueError(f"form {self.form.value} with a measure word needs a unit")
        if self.form is FractionForm.MONO and self.num != 1:
            raise ValueError("a one-part fraction has numerator 1")
        if self.den == 0 and not self.elided:
            raise ValueError("denominator 0 is only a placeholder for an elided denominator")
        if self.den < 0:
            raise ValueError("negative denominator")
        if self.num is not None and self.den and self.num >= self.den:
            raise ImproperFractionError(self.num, self.den)

    @property
    def has_zhi(self) -> bool:
        return self.form.has_zhi

    @property
    def resolved(self) -> bool:
        return self.den > 0 and self.num is not None

    @property
    def value(self) -> Rational:
        if self.num is None:
            raise ValueError("numerator is illegible")
        if self.den == 0:
            raise ValueError("denominator is elided and not yet resolved")
        return Rational(self.num, self.den)


@dataclass(frozen=True)
class Quantity:
    """A noun-qualified mixed number over a descending chain of units."""

    int_parts: tuple[IntPart, ...] = ()
    frac: Optional[FracPart] = None
    noun: Optional[str] = None
    linker_you: bool = False
    flags: frozenset[str] = field(default=frozenset(), compare=False)
    spelling: frozenset[str] = field(default=frozenset(), compare=False)
    ligatures: Optional[LigatureStyle] = field(default=None, compare=False)

    def __post_init__(self):
        if not self.int_parts and self.frac is None:
            raise ValueError("a quantity needs an integer or a fractional part")
        if self.linker_you and not (self.int_parts and self.frac):
            raise ValueError("又 only links an integer part to a fraction")
        units = [p.unit for p in self.int_parts]
        if any(u is None for u in units) and len(units) > 1:
            raise ValueError("only a lone integer part may be unitless")
        chain = [u for u in units if u is not None]
        if self.frac is not None and self.frac.unit is not None:
            chain.append(self.frac.unit)
        for hi, lo in zip(chain, chain[1:]):
            if hi.family != lo.family:
                raise DimensionError(f"mixed dimensions: {hi.glyph} and {lo.glyph}")
        int_chain = [u for u in units if u is not None]
        for hi, lo in zip(int_chain, int_chain[1:]):
            if not hi.ratio > lo.ratio:
                raise DimensionError(f"units not descending: {hi.glyph} then {lo.glyph}")
        if int_chain and self.frac is not None and self.frac.unit is not None:
            if self.frac.unit.ratio > int_chain[-1].ratio:
                raise DimensionError("fraction unit larger than the last integer unit")

    @property
    def unit(self) -> Optional["Unit"]:
        """The smallest unit in the quantity, if any."""
        if self.frac is not None and self.frac.unit is not None:
            return self.frac.unit
        for p in reversed(self.int_parts):
            if p.unit is not None:
                return p.unit
        return None

    def _whole(self) -> Fraction:
        unit = self.unit
        if unit is None:
            return Fraction(sum(p.coef for p in self.int_parts))
        return sum((p.coef * (p.unit.ratio / unit.ratio) for p in self.int_parts), Fraction(0))

    @property
    def integer(self) -> int:
        """Integer parts summed in the smallest unit (coefficient only when unitless)."""
        total = self._whole()
        if total.denominator != 1:
            raise DimensionError("integer parts do not divide evenly into the smallest unit")
        return int(total)

    def magnitude(self) -> Fraction:
        """The whole amount expressed in the smallest unit."""
        total = self._whole()
        if self.frac is not None:
            total += self.frac.value.value
        return total

    def with_frac(self, frac: Optional[FracPart]) -> "Quantity":
        return Quantity(self.int_parts, frac, self.noun, self.linker_you and frac is not None,
                        self.flags, self.spelling, self.ligatures)

    def with_flags(self, *flags: str) -> "Quantity":
        return Quantity(self.int_parts, self.frac, self.noun, self.linker_you,
                        self.flags | frozenset(flags), self.spelling, self.ligatures)


VARIANTS = {"有": "又", "泰": "大", "朱": "銖"}
SEVENTY = "\U0002010e"
LIGATURE_TENS = {"廿": 2, "卅": 3, "卌": 4}
ILLEGIBLE = "□"


def ligature_table(seventy: str = SEVENTY) -> dict[str, int]:
    table = dict(LIGATURE_TENS)
    table[seventy] = 7
    return table


DIGITS = {c: i for i, c in enumerate("一二三四五六七八九", start=1)}
DIGIT_GLYPHS = {v: k for k, v in DIGITS.items()}
PIVOTS = {"十": 10, "百": 100, "千": 1000, "萬": 10000}


def normalize(text: str, seventy: str = SEVENTY) -> str:
    """Map manuscript variant glyphs to one spelling and expand tens ligatures."""
    out = []
    for ch in text:
        if ch in VARIANTS:
            out.append(VARIANTS[ch])
        elif ch in LIGATURE_TENS or ch == seventy:
            tens = LIGATURE_TENS.get(ch, 7)
            out.append(DIGIT_GLYPHS[tens] + "十")
        else:
            out.append(ch)
    return "".join(out)


class TokenKind(enum.Enum):
    DIGIT = "digit"
    PIVOT = "pivot"
    LIGATURE = "ligature"
    FEN = "fen"
    ZHI = "zhi"
    YOU = "you"
    BAN = "ban"
    SHAOBAN = "shaoban"
    TAIBAN = "taiban"
    UNIT = "unit"
    ILLEGIBLE = "illegible"
    BOUNDARY = "boundary"
    GLYPH = "glyph"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    pos: int
    value: int = 0
    units: tuple = ()


def tokenize(text: str, registry: "UnitRegistry | None" = None, seventy: str = SEVENTY) -> list[Token]:
    """Split text into tokens; ligatures and variant glyphs are recognized as written."""
    if registry is None:
        from .metrology import default_registry
        registry = default_registry()
    ligs = ligature_table(seventy)
    unit_glyphs = sorted(registry.glyphs(), key=len, reverse=True)
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        pair = text[i:i + 2]
        if ch.isspace():
            tokens.append(Token(TokenKind.BOUNDARY, ch, i))
            i += 1
            continue
        if pair == "少半":
            tokens.append(Token(TokenKind.SHAOBAN, pair, i))
            i += 2
            continue
        if pair in ("大半", "泰半"):
            tokens.append(Token(TokenKind.TAIBAN, pair, i))
            i += 2
            continue
        glyph = next((g for g in unit_glyphs if text.startswith(g, i)), None)
        if glyph is not None:
            units = tuple(registry.by_glyph(normalize(glyph, seventy)))
            tokens.append(Token(TokenKind.UNIT, glyph, i, units=units))
            i += len(glyph)
            continue
        if ch in DIGITS:
            tokens.append(Token(TokenKind.DIGIT, ch, i, DIGITS[ch]))
        elif ch in PIVOTS:
            tokens.append(Token(TokenKind.PIVOT, ch, i, PIVOTS[ch]))
        elif ch in ligs:
            tokens.append(Token(TokenKind.LIGATURE, ch, i, ligs[ch] * 10))
        elif ch == "分":
            tokens.append(Token(TokenKind.FEN, ch, i))
        elif ch == "之":
            tokens.append(Token(TokenKind.ZHI, ch, i))
        elif ch in "又有":
            tokens.append(Token(TokenKind.YOU, ch, i))
        elif ch == "半":
            tokens.append(Token(TokenKind.BAN, ch, i))
        elif ch == ILLEGIBLE:
            tokens.append(Token(TokenKind.ILLEGIBLE, ch, i))
        else:
            tokens.append(Token(TokenKind.GLYPH, ch, i))
        i += 1
    return tokens
