from fractions import Fraction

import pytest

from hqe.valq import INF, NEG_INF, ValQ, vmin


def test_lowest_terms():
    v = ValQ(6, 4)
    assert (v.num, v.den) == (3, 2)
    assert str(v) == "3/2"


def test_total_order():
    assert NEG_INF < ValQ(-10) < ValQ(0) < ValQ(1, 3) < ValQ(1) < INF
    assert ValQ(2) <= ValQ(2)
    assert INF >= INF


def test_addition_and_infinities():
    assert ValQ(1, 2) + ValQ(1, 3) == ValQ(5, 6)
    assert INF + ValQ(7) == INF
    assert NEG_INF + ValQ(7) == NEG_INF
    with pytest.raises(ValueError):
        INF + NEG_INF


def test_scaling_and_division():
    assert ValQ(3) * 2 == ValQ(6)
    assert ValQ(3) / 2 == ValQ(3, 2)
    assert -INF == NEG_INF
    assert INF * 5 == INF
    assert INF * -1 == NEG_INF


def test_floor_ceil():
    assert ValQ(3, 2).floor() == 1
    assert ValQ(3, 2).ceil() == 2
    assert ValQ(-3, 2).floor() == -2
    assert ValQ(4).ceil() == 4


def test_of_and_int_conversion():
    assert ValQ.of(Fraction(2, 4)) == ValQ(1, 2)
    assert ValQ.of(5).as_int() == 5
    with pytest.raises(ValueError):
        ValQ(1, 2).as_int()
    with pytest.raises(ValueError):
        INF.as_int()


def test_vmin():
    assert vmin([ValQ(3), ValQ(1), INF]) == ValQ(1)
    assert vmin([]) == INF
