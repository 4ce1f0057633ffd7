"""Exactness, ordering and parsing tests for the quadratic-field layer."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cyldec.quadfield import (
    MixedDiscriminants,
    QuadNum,
    format_scalar,
    is_square_free,
    parse_scalar,
    scalar_floor,
    scalar_sign,
    sqrt_disc,
)

DISCS = [2, 3, 5, 6, 7, 13]

rationals = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=12
)


@st.composite
def quadnums(draw, disc=None):
    a = draw(rationals)
    b = draw(rationals)
    d = disc if disc is not None else draw(st.sampled_from(DISCS))
    return QuadNum(a, b, d if b != 0 else None)


def test_square_free_validation():
    assert is_square_free(2) and is_square_free(15) and is_square_free(13)
    assert not is_square_free(4) and not is_square_free(12) and not is_square_free(1)
    with pytest.raises(ValueError):
        QuadNum(1, 1, 8)
    with pytest.raises(ValueError):
        QuadNum(0, 2, None)


def test_known_values():
    r2 = sqrt_disc(2)
    assert r2 * r2 == 2
    assert (1 + r2) * (1 + r2) == 3 + 2 * r2
    assert (1 + r2) * (r2 - 1) == 1
    assert (2 + r2) / (1 + r2) == r2
    assert Fraction(1, 2) + r2 == QuadNum(Fraction(1, 2), 1, 2)
    assert float(r2) == pytest.approx(2**0.5)


def test_sign_cases():
    r5 = sqrt_disc(5)
    assert (2 - r5).sign() == -1
    assert (3 - r5).sign() == 1
    assert (r5 - 2).sign() == 1
    assert QuadNum(0).sign() == 0
    assert scalar_sign(Fraction(-3, 7)) == -1
    assert scalar_sign(0) == 0


def test_floor_cases():
    r2 = sqrt_disc(2)
    assert r2.floor() == 1
    assert (-r2).floor() == -2
    assert (3 * r2).floor() == 4
    assert (r2 - r2).floor() == 0
    assert scalar_floor(Fraction(-7, 2)) == -4
    assert ((1 + r2) % 1) == r2 - 1


def test_mixed_discriminants_rejected():
    with pytest.raises(MixedDiscriminants):
        sqrt_disc(2) + sqrt_disc(3)
    # Rational-valued QuadNums carry no field tag and mix freely.
    assert QuadNum(3) + sqrt_disc(3) == 3 + sqrt_disc(3)
    assert sqrt_disc(2) != sqrt_disc(3)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        sqrt_disc(2) / QuadNum(0)


@given(quadnums(disc=5), quadnums(disc=5), quadnums(disc=5))
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    if x:
        assert x * (1 / x) == 1


@given(quadnums(disc=3), quadnums(disc=3), quadnums(disc=3))
def test_order_compatibility(x, y, z):
    assert (x < y) + (x == y) + (y < x) == 1
    if x < y:
        assert x + z < y + z
        if z > 0:
            assert x * z < y * z


@given(quadnums())
def test_floor_bracket(x):
    n = x.floor()
    assert n <= x < n + 1


@given(quadnums())
def test_format_parse_round_trip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(quadnums())
def test_float_consistency(x):
    approx = float(x.a) + float(x.b) * float(x.disc or 0) ** 0.5
    assert float(x) == pytest.approx(approx, abs=1e-6)
    if abs(approx) > 1e-6:
        assert x.sign() == (1 if approx > 0 else -1)


def test_parse_forms():
    assert parse_scalar("3/4") == Fraction(3, 4)
    assert parse_scalar("-2") == -2
    assert parse_scalar("sqrt(2)") == sqrt_disc(2)
    assert parse_scalar("-sqrt(2)") == -sqrt_disc(2)
    assert parse_scalar("1/2+3/2*sqrt(5)") == QuadNum(Fraction(1, 2), Fraction(3, 2), 5)
    assert parse_scalar("1-1/3*sqrt(7)") == QuadNum(1, Fraction(-1, 3), 7)
    with pytest.raises(ValueError):
        parse_scalar("sqrt(2)+sqrt(3)")
