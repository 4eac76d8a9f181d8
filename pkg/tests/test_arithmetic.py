from fractions import Fraction

import pytest

from suanshu.arithmetic import (add, divide_by, halve_both, infer_product_operand, mul, mul_quantities, reduce, share,
                                to_mixed)
from suanshu.codec import parse_quantity
from suanshu.core import DimensionError, Rational, StatementError
from suanshu.metrology import Dimension, Measure, default_registry

U = default_registry().get


def _brute_gcd(a: int, b: int) -> int:
    return max(d for d in range(1, min(a, b) + 1) if a % d == 0 and b % d == 0)


def test_reduce_examples():
    assert reduce(Rational(162, 2016)) == Rational(9, 112)
    assert reduce(Rational(1, 2)) == Rational(1, 2)


def test_reduce_against_brute_force():
    r = reduce(Rational(123456, 789012))
    g = _brute_gcd(123456, 789012)
    assert r == Rational(123456 // g, 789012 // g)
    assert _brute_gcd(r.num, r.den) == 1
    assert r.num * 789012 == r.den * 123456


def test_halve_both():
    h = halve_both(Rational(162, 2016))
    assert h == Rational(81, 1008)
    assert h.num * 2016 == h.den * 162
    assert halve_both(Rational(2, 4)) == Rational(1, 2)
    with pytest.raises(ValueError):
        halve_both(Rational(9, 112))


@pytest.mark.parametrize("a,b,expected", [
    (Rational(1, 4), Rational(1, 4), Rational(1, 16)),
    (Rational(1, 2), 1, Rational(1, 2)),
    (Rational(1, 2), Rational(1, 2), Rational(1, 4)),
    (Rational(1, 3), Rational(1, 3), Rational(1, 9)),
    (Rational(1, 3), Rational(2, 3), Rational(2, 9)),
    (Rational(1, 3), 1, Rational(1, 3)),
    (Rational(1, 6), Rational(1, 7), Rational(1, 42)),
    (Rational(1, 4), Rational(1, 5), Rational(1, 20)),
])
def test_mul(a, b, expected):
    assert mul(a, b) == expected


def test_mul_is_not_reduced():
    assert mul(Rational(2, 4), Rational(3, 6)) == Rational(6, 24)


def test_share():
    assert share(add(3, Rational(1, 2), Rational(1, 3)), 5) == Rational(23, 30)
    assert share(Rational(7, 9), 1) == Rational(7, 9)
    got = share(Rational(17, 4), 3)
    assert got.num * 4 * 3 == got.den * 17
    with pytest.raises(ValueError):
        share(1, 0)


def test_divide_by_keeps_divisor():
    dividend = 2055 * 36 + 20
    assert dividend == 74000
    r = divide_by(dividend, 36)
    assert r == Rational(74000, 36)
    assert to_mixed(r) == (2055, Rational(20, 36))
    assert reduce(divide_by(10, 2)) == Rational(5, 1)
    got = divide_by(Rational(9, 112), 9)
    assert got.num * 112 * 9 == got.den * 9 and reduce(got) == Rational(1, 112)


def test_mul_quantities_area():
    m = mul_quantities(Measure(Fraction(1, 5), U("cun")), Measure(1, U("chi")))
    assert (m.value, m.unit.key, m.power, m.dimension) == (Fraction(1, 50), "chi", 2, Dimension.AREA)
    m = mul_quantities(Measure(Fraction(1, 2), U("bu")), Measure(Fraction(1, 2), U("bu")))
    assert (m.value, m.unit.key, m.power) == (Fraction(1, 4), "bu", 2)
    m = mul_quantities(Measure(1, U("chi")), Measure(1, U("chi")))
    assert (m.value, m.power) == (1, 2)


def test_mul_quantities_volume_and_scalar():
    area = Measure(3, U("chi"), 2)
    assert mul_quantities(area, Measure(2, U("chi"))).dimension is Dimension.VOLUME
    m = mul_quantities(3, Measure(Fraction(1, 3), U("dou")))
    assert (m.value, m.unit.key) == (1, "dou")


def test_mul_quantities_rejects_mixed_dimensions():
    with pytest.raises(DimensionError):
        mul_quantities(Measure(1, U("chi")), Measure(1, U("dou")))


def test_infer_operand():
    got = infer_product_operand((Fraction(1, 6), parse_quantity("七")), Fraction(1, 42))
    assert got.operands == (Fraction(1, 6), Fraction(1, 7)) and got.reinterpreted == 1
    got = infer_product_operand((parse_quantity("四"), Fraction(1, 5)), Fraction(1, 20))
    assert got.operands == (Fraction(1, 4), Fraction(1, 5)) and got.reinterpreted == 0
    got = infer_product_operand((Fraction(1, 2), Fraction(1, 2)), Fraction(1, 4))
    assert got.reinterpreted is None


def test_infer_operand_only_retries_bare_integers():
    with pytest.raises(StatementError):
        infer_product_operand((Fraction(1, 6), Fraction(1, 6)), Fraction(1, 42))
