"""Numbers, fractions and measures as written in early Chinese mathematical manuscripts.

>>> from suanshu import parse_quantity, format_value
>>> format_value(parse_quantity("七斗三分升一"))
'7 dou + 1/3 sheng'
"""

from .arithmetic import add, divide_by, halve_both, infer_product_operand, mul, mul_quantities, reduce, share, to_mixed
from .codec import (RenderOptions, classify, format_value, parse_quantity, parse_value, render_fraction,
                    render_quantity, resolve_elision, select_form)
from .core import (AmbiguousUnitError, DimensionError, FracPart, FractionForm, ImproperFractionError,
                   InsertionContext, IntPart, LigatureStyle, ParseError, PatternCategory, Policy, Quantity, Rational,
                   RenderError, StatementError, SuanshuError, normalize, tokenize)
from .corpus import load_corpus, roundtrip_verify, stats, verify_series, verify_statements
from .metrology import Dimension, Measure, Unit, UnitRegistry, convert, decompose, default_registry
from .numerals import MAX_INTEGER, parse_integer, render_integer
from .statements import parse_statement

__version__ = "0.1.0"

__all__ = [
    "add", "divide_by", "halve_both", "infer_product_operand", "mul", "mul_quantities", "reduce", "share",
    "to_mixed",
    "RenderOptions", "classify", "format_value", "parse_quantity", "parse_value", "render_fraction",
    "render_quantity", "resolve_elision", "select_form",
    "AmbiguousUnitError", "DimensionError", "FracPart", "FractionForm", "ImproperFractionError",
    "InsertionContext", "IntPart", "LigatureStyle", "ParseError", "PatternCategory", "Policy", "Quantity",
    "Rational", "RenderError", "StatementError", "SuanshuError", "normalize", "tokenize",
    "load_corpus", "roundtrip_verify", "stats", "verify_series", "verify_statements",
    "Dimension", "Measure", "Unit", "UnitRegistry", "convert", "decompose", "default_registry",
    "MAX_INTEGER", "parse_integer", "render_integer", "parse_statement",
]
