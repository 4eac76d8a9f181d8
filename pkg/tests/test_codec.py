import pytest

from suanshu.codec import (RenderOptions, classify, format_value, parse_quantity, parse_value, render_fraction,
                           render_quantity, resolve_elision, select_form)
from suanshu.core import (AmbiguousUnitError, FractionForm, ImproperFractionError, InsertionContext, LigatureStyle,
                          ParseError, Policy, Rational, RenderError)
from suanshu.metrology import Dimension, default_registry

REG = default_registry()
CHI, DOU, SHENG, BU = (REG.get(k) for k in ("chi", "dou", "sheng", "bu"))
F = FractionForm


@pytest.mark.parametrize("value,unit,opts,text", [
    (Rational(12, 18), CHI, RenderOptions(form=F.D), "十八分尺之十二"),
    (Rational(1, 3), None, RenderOptions(form=F.MONO), "三分"),
    (Rational(23, 30), None, RenderOptions(form=F.C), "卅分之廿三"),
    (Rational(23, 30), None, RenderOptions(form=F.C, ligatures=LigatureStyle.PLAIN), "三十分之二十三"),
    (Rational(2, 3), DOU, RenderOptions(form=F.LEX_TWO_THIRDS), "大半斗"),
    (Rational(1, 2), None, RenderOptions(), "半"),
    (Rational(1, 3), DOU, RenderOptions(), "少半斗"),
    (Rational(5, 40), DOU, RenderOptions(), "卌分斗五"),
    (Rational(3, 10), SHENG, RenderOptions(insertion=InsertionContext.PREDICATE), "十分升之三"),
])
def test_render_fraction(value, unit, opts, text):
    assert render_fraction(value, unit, opts) == text


@pytest.mark.parametrize("value,unit,insertion,form", [
    (Rational(3, 10), SHENG, InsertionContext.PREDICATE, F.D),
    (Rational(5, 40), DOU, InsertionContext.UNINSERTED, F.B),
    (Rational(1, 2), DOU, InsertionContext.OBJECT, F.LEX_HALF),
    (Rational(1, 2), None, InsertionContext.UNINSERTED, F.LEX_HALF),
    (Rational(1, 3), None, InsertionContext.UNINSERTED, F.MONO),
    (Rational(2, 3), None, InsertionContext.UNINSERTED, F.A),
    (Rational(2, 3), None, InsertionContext.OBJECT, F.C),
    (Rational(2, 3), DOU, InsertionContext.PREDICATE, F.LEX_TWO_THIRDS),
    (Rational(1, 7), None, InsertionContext.UNINSERTED, F.MONO),
    (Rational(1, 7), None, InsertionContext.OBJECT, F.C),
    (Rational(4, 7), None, InsertionContext.UNKNOWN, F.A),
])
def test_select_form(value, unit, insertion, form):
    assert select_form(value, unit, insertion) is form


def test_zhi_policies():
    assert render_fraction(Rational(2, 5), None, RenderOptions(zhi=Policy.FORCE)) == "五分之二"
    assert render_fraction(Rational(2, 5), CHI, RenderOptions(zhi=Policy.FORCE)) == "五分尺之二"
    suppress = RenderOptions(zhi=Policy.SUPPRESS, insertion=InsertionContext.OBJECT)
    assert render_fraction(Rational(2, 5), CHI, suppress) == "五分尺二"
    with pytest.raises(ValueError):
        RenderOptions(form=F.MONO, zhi=Policy.FORCE)
    with pytest.raises(ValueError):
        render_fraction(Rational(1, 2), None, RenderOptions(zhi=Policy.FORCE))


def test_render_fraction_errors():
    with pytest.raises(RenderError):
        render_fraction(Rational(4, 3))
    with pytest.raises(RenderError):
        render_fraction(Rational(0, 3))
    with pytest.raises(RenderError):
        render_fraction(Rational(2, 5), None, RenderOptions(form=F.B))
    with pytest.raises(RenderError):
        render_fraction(Rational(2, 5), None, RenderOptions(form=F.MONO))
    with pytest.raises(RenderError):
        render_fraction(Rational(1, 3), None, RenderOptions(form=F.LEX_HALF))


@pytest.mark.parametrize("value,opts,text", [
    ("16 chi + 12/18 chi", RenderOptions(form=F.B, you=Policy.FORCE), "十六尺有十八分尺十二"),
    ("16 chi + 12/18 chi", RenderOptions(form=F.D), "十六尺有十八分尺之十二"),
    ("16 chi + 12/18 chi", RenderOptions(form=F.D, ligatures=LigatureStyle.PLAIN), "十六尺又十八分尺之十二"),
    ("7 dou + 1/3 sheng", RenderOptions(form=F.B), "七斗三分升一"),
    ("1", RenderOptions(), "一"),
    ("3 + 2/5", RenderOptions(), "三有五分二"),
    ("米 | 6 sheng + 1/4 sheng", RenderOptions(form=F.D), "米六升有四分升之一"),
    ("米 | 6 sheng + 1/4 sheng", RenderOptions(form=F.D, you=Policy.SUPPRESS), "米六升四分升之一"),
])
def test_render_quantity(value, opts, text):
    assert render_quantity(parse_value(value, opts.form), opts) == text


def test_bare_integer_needs_linker_when_it_would_merge():
    assert render_quantity(parse_value("3 + 2/5"), RenderOptions(you=Policy.SUPPRESS)) == "三五分二"
    assert format_value(parse_quantity("三五分二")) == "3 + 2/5"
    q = parse_value("10 + 1/3")
    with pytest.raises(RenderError):
        render_quantity(q, RenderOptions(you=Policy.SUPPRESS))
    q = parse_value("1 + 1/2")
    with pytest.raises(RenderError):
        render_quantity(q, RenderOptions(you=Policy.SUPPRESS))


def test_parse_quantity_examples():
    q = parse_quantity("金三朱九分朱五")
    assert format_value(q) == "金 | 3 zhu + 5/9 zhu"
    assert q.frac.form is F.B
    assert render_quantity(q) == "金三朱九分朱五"

    q = parse_quantity("米六升四分升之一")
    assert format_value(q) == "米 | 6 sheng + 1/4 sheng"
    assert q.frac.form is F.D and q.frac.has_zhi

    q = parse_quantity("半")
    assert q.frac.form is F.LEX_HALF and q.frac.value == Rational(1, 2)


def test_linker_is_recorded():
    q = parse_quantity("十六尺有十八分尺十二")
    assert q.linker_you
    assert render_quantity(q) == "十六尺有十八分尺十二"
    assert render_quantity(parse_quantity("十六尺又十八分尺十二")) == "十六尺又十八分尺十二"


def test_elided_denominator_in_series():
    q = parse_quantity("三斗分九", series=True)
    assert format_value(q) == "3 dou + 9/_ dou"
    assert {"elided_den", "mw_omitted"} <= q.flags


def test_series_mode_changes_the_reading():
    assert format_value(parse_quantity("八卌九分")) == "8 + 1/49"
    assert format_value(parse_quantity("八卌九分", series=True)) == "8 + 49/_"
    with pytest.raises(ImproperFractionError):
        parse_quantity("卅一錢五分五")


def test_stray_numeral_in_series():
    q = parse_quantity("卅一錢五分五", series=True)
    assert format_value(q) == "31 qian + 5/_ qian"
    assert q.frac.stray == 5
    assert "stray_numeral" in q.flags
    assert render_quantity(q) == "卅一錢五分五"


def test_improper_fraction_outside_series():
    with pytest.raises(ImproperFractionError):
        parse_quantity("三分之五")


@pytest.mark.parametrize("text,label", [
    ("十八分尺之十二", "d2"),
    ("四分步一", "b1"),
    ("三十分之一", "c1"),
    ("五分二", "a2"),
    ("三分", "mono"),
    ("少半升", "third"),
    ("大半斗", "two_thirds"),
])
def test_classify(text, label):
    assert classify(parse_quantity(text)).label == label


def test_classify_integer_is_none():
    assert classify(parse_quantity("二千一十六")) is None


def _series(texts):
    return [parse_quantity(t, series=True) for t in texts]


def test_resolve_elision_carries_denominator():
    got = resolve_elision(_series(["十二𠄎二分十一", "八卌九分", "四 十二分"]))
    assert [format_value(q) for q in got] == ["12 + 11/72", "8 + 49/[72]", "4 + 12/[72]"]
    got = resolve_elision(_series(["四斗卌七分十二", "三斗分九", "二斗分廿六"]))
    assert [format_value(q) for q in got] == ["4 dou + 12/47 dou", "3 dou + 9/[47] dou", "2 dou + 26/[47] dou"]
    assert all(q.frac.value.is_proper() for q in got)


def test_resolve_elision_leaves_explicit_alone():
    q = parse_quantity("七斗三分升一")
    assert resolve_elision([q]) == [q]


def test_resolve_elision_from_divisor():
    got = resolve_elision(_series(["二千五十五尺分廿"]), divisor=36)
    assert format_value(got[0]) == "2055 chi + 20/[36] chi"


def test_resolve_elision_needs_a_source():
    with pytest.raises(ParseError):
        resolve_elision(_series(["三斗分九"]))


def test_implicit_one():
    q = parse_quantity("尺")
    assert format_value(q) == "(1) chi"
    q = parse_quantity("石二斗")
    assert format_value(q) == "(1) shi-capacity + 2 dou"


def test_shi_resolution():
    assert parse_quantity("一石").int_parts[0].unit.ambiguous
    assert parse_quantity("一石", dimension=Dimension.WEIGHT).int_parts[0].unit.key == "shi-weight"
    assert parse_quantity("粟一石").int_parts[0].unit.key == "shi-capacity"
    assert parse_quantity("一石二鈞").int_parts[0].unit.key == "shi-weight"
    with pytest.raises(AmbiguousUnitError):
        REG.get("shi")


def test_yi_ban_reading():
    q = parse_quantity("一半")
    assert "yi_ban" in q.flags and q.frac.value == Rational(1, 2)
    assert render_quantity(q) == "一半"


def test_illegible_numerator():
    q = parse_quantity("廣七步卌九分步之□")
    assert q.frac.num is None
    assert format_value(q) == "廣 | 7 bu + ?/49 bu"
    q = parse_quantity("從八十一步有七千三百八十一分步之六千八百□□")
    assert format_value(q) == "從 | 81 bu + 6800+?/7381 bu"
    with pytest.raises(RenderError):
        render_quantity(q)


def test_tripled_measure_word():
    q = parse_quantity("十一步有九十七分步𠄎九步")
    assert "mw_tripled" in q.flags
    assert format_value(q) == "11 bu + 79/97 bu"
    assert render_quantity(q) == "十一步有九十七分步𠄎九步"


@pytest.mark.parametrize("text", [
    "米 | 6 sheng + 1/4 sheng", "(1) chi", "16 chi + 12/18 chi", "3 dou + 9/[47] dou", "3 dou + 9/_ dou",
    "廣 | 7 bu + ?/49 bu", "2016",
])
def test_value_string_round_trip(text):
    assert format_value(parse_value(text)) == text


def test_parse_errors():
    for text in ("", "分", "之五"):
        with pytest.raises(ParseError):
            parse_quantity(text)
