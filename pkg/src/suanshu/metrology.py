"""Units of measure, exact conversion and the dimension algebra."""

from __future__ import annotations

import csv
import enum
import unicodedata
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Union

from .core import VARIANTS, AmbiguousUnitError, DimensionError, IntPart, FracPart, Quantity, Rational


class Dimension(enum.Enum):
    LENGTH = "length"
    AREA = "area"
    VOLUME = "volume"
    CAPACITY = "capacity"
    WEIGHT = "weight"
    CURRENCY = "currency"
    COUNT = "count"


@dataclass(frozen=True)
class Unit:
    key: str
    glyph: str
    pinyin: str
    dimension: Optional[Dimension]
    ratio: Fraction = field(compare=False)
    aliases: tuple[str, ...] = field(default=(), compare=False)

    @property
    def family(self) -> str:
        """Units convert into each other only within one family."""
        if self.dimension is None:
            return f"ambiguous:{self.glyph}"
        if self.dimension is Dimension.COUNT:
            return f"count:{self.key}"
        return self.dimension.value

    @property
    def ambiguous(self) -> bool:
        return self.dimension is None

    def __str__(self) -> str:
        return self.key


def strip_tones(text: str) -> str:
    decomposed = unicodedata.normalize("NFD", text)
    return "".join(c for c in decomposed if not unicodedata.combining(c))


class UnitRegistry:
    def __init__(self, units: Iterable[Unit]):
        self.units = list(units)
        self._by_key = {u.key: u for u in self.units}
        self._by_glyph: dict[str, list[Unit]] = {}
        for u in self.units:
            for g in (u.glyph, *u.aliases):
                self._by_glyph.setdefault(g, []).append(u)
        self._placeholders = {}
        for g, us in self._by_glyph.items():
            if len(us) > 1:
                self._placeholders[g] = Unit(strip_tones(us[0].pinyin), g, us[0].pinyin, None, Fraction(1))

    @classmethod
    def from_tsv(cls, path: Union[str, Path]) -> "UnitRegistry":
        with open(path, encoding="utf-8", newline="") as fh:
            return cls(_read_units(fh))

    def glyphs(self) -> set[str]:
        out = set(self._by_glyph)
        for raw, norm in VARIANTS.items():
            if norm in self._by_glyph:
                out.add(raw)
        return out

    def by_glyph(self, glyph: str) -> list[Unit]:
        glyph = VARIANTS.get(glyph, glyph)
        return list(self._by_glyph.get(glyph, []))

    def placeholder(self, glyph: str) -> Unit:
        """The unresolved stand-in for a glyph shared by several dimensions."""
        return self._placeholders[VARIANTS.get(glyph, glyph)]

    def get(self, name: str, dimension: Optional[Dimension] = None) -> Unit:
        """Look a unit up by key, glyph or toneless pinyin."""
        if name in self._by_key:
            return self._by_key[name]
        candidates = self.by_glyph(name)
        if not candidates:
            bare = strip_tones(name).lower()
            candidates = [u for u in self.units if strip_tones(u.pinyin) == bare]
        if not candidates:
            raise KeyError(f"unknown unit {name!r}")
        if dimension is not None:
            candidates = [u for u in candidates if u.dimension is dimension]
            if not candidates:
                raise DimensionError(f"{name!r} has no {dimension.value} reading")
        if len(candidates) > 1:
            dims = ", ".join(u.dimension.value for u in candidates)
            raise AmbiguousUnitError(f"{name!r} is ambiguous ({dims}); give a dimension")
        return candidates[0]

    def chain(self, dimension: Dimension) -> list[Unit]:
        """All units of a dimension, largest first."""
        return sorted((u for u in self.units if u.dimension is dimension), key=lambda u: u.ratio, reverse=True)


def _read_units(fh) -> list[Unit]:
    units = []
    for row in csv.DictReader(fh, delimiter="\t"):
        aliases = () if row["aliases"] in ("", "-") else tuple(row["aliases"].split(","))
        units.append(Unit(row["key"], row["glyph"], row["pinyin"], Dimension(row["dimension"]),
                          Fraction(row["ratio"]), aliases))
    return units


@lru_cache(maxsize=None)
def default_registry() -> UnitRegistry:
    text = resources.files("suanshu").joinpath("data/units.tsv").read_text(encoding="utf-8")
    return UnitRegistry(_read_units(text.splitlines()))


@dataclass(frozen=True)
class Noun:
    glyph: str
    pinyin: str
    gloss: str
    grain: bool
    unit_hint: Optional[str]


@lru_cache(maxsize=None)
def noun_lexicon() -> dict[str, Noun]:
    text = resources.files("suanshu").joinpath("data/nouns.tsv").read_text(encoding="utf-8")
    lexicon = {}
    for row in csv.DictReader(text.splitlines(), delimiter="\t"):
        hint = None if row["unit_hint"] in ("", "-") else row["unit_hint"]
        lexicon[row["glyph"]] = Noun(row["glyph"], row["pinyin"], row["gloss"], row["grain"] == "1", hint)
    return lexicon


_POWERS = {1: Dimension.LENGTH, 2: Dimension.AREA, 3: Dimension.VOLUME}


@dataclass(frozen=True)
class Measure:
    """An exact amount of a unit raised to a power (only lengths take powers above one)."""

    value: Fraction
    unit: Unit
    power: int = 1

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value.value if isinstance(self.value, Rational) else self.value))
        if self.power != 1 and self.unit.dimension is not Dimension.LENGTH:
            raise DimensionError(f"{self.unit.key} cannot be raised to a power")
        if self.power not in (1, 2, 3):
            raise DimensionError("only powers 1 to 3 are meaningful")

    @property
    def dimension(self) -> Dimension:
        if self.unit.dimension is None:
            raise AmbiguousUnitError(f"{self.unit.glyph} has not been resolved to a dimension")
        if self.unit.dimension is Dimension.LENGTH:
            return _POWERS[self.power]
        return self.unit.dimension

    def __str__(self) -> str:
        suffix = f"^{self.power}" if self.power > 1 else ""
        return f"{self.value} {self.unit.key}{suffix}"


def convert(measure: Measure, target: Unit) -> Measure:
    """Re-express a measure in another unit of the same family, exactly."""
    src = measure.unit
    if src.ambiguous or target.ambiguous:
        raise AmbiguousUnitError(f"cannot convert an unresolved {src.glyph if src.ambiguous else target.glyph}")
    if src.family != target.family:
        raise DimensionError(f"cannot convert {src.key} to {target.key}")
    factor = (src.ratio / target.ratio) ** measure.power
    return Measure(measure.value * factor, target, measure.power)


def dim_product(a: Optional[Dimension], b: Optional[Dimension]) -> Optional[Dimension]:
    """Dimension of a product; None stands for a pure number."""
    if a is None:
        return b
    if b is None:
        return a
    order = [Dimension.LENGTH, Dimension.AREA, Dimension.VOLUME]
    if a in order and b in order:
        total = order.index(a) + order.index(b) + 2
        if total <= 3:
            return order[total - 1]
    raise DimensionError(f"no product of {a.value} and {b.value}")


def decompose(measure: Measure, chain: list[Unit], den: Optional[int] = None) -> Quantity:
    """Split a measure over descending units; the remainder becomes a proper fraction of the last unit.

    Zero ranks are skipped. ``den`` keeps the remainder over a chosen
    denominator instead of lowest terms, when it divides evenly.
    """
    from .codec import select_form
    from .core import InsertionContext

    if not chain:
        raise ValueError("empty unit chain")
    if measure.power != 1:
        raise DimensionError("decompose works on first powers only")
    ordered = sorted(chain, key=lambda u: u.ratio, reverse=True)
    if ordered != list(chain):
        raise DimensionError("unit chain must be strictly descending")
    rest = convert(measure, ordered[-1]).value
    if rest < 0:
        raise ValueError("negative measure")
    parts = []
    for unit in ordered[:-1]:
        step = unit.ratio / ordered[-1].ratio
        coef = int(rest // step)
        rest -= coef * step
        if coef:
            parts.append(IntPart(coef, unit))
    whole = int(rest)
    rest -= whole
    if whole:
        parts.append(IntPart(whole, ordered[-1]))
    frac = None
    if rest:
        r = Rational.of(rest)
        if den is not None:
            if (r.num * den) % r.den:
                raise ValueError(f"remainder {r} is not a whole number of {den}ths")
            r = Rational(r.num * den // r.den, den)
        frac = FracPart(r.num, r.den, ordered[-1], select_form(r, ordered[-1], InsertionContext.UNINSERTED))
    if not parts and frac is None:
        raise ValueError("a zero measure has no written form")
    return Quantity(tuple(parts), frac)
