import math
from fractions import Fraction

import pytest

from stfharmonics.errors import ExactArithmeticError, FormatError
from stfharmonics.exact import Exact, GaussianRational, I


def test_pi_multiples_add_exactly():
    assert Exact.pi(Fraction(4, 3)) + Exact.pi(Fraction(2, 3)) == Exact.pi(2)


def test_adding_different_powers_of_pi_raises():
    with pytest.raises(ExactArithmeticError):
        Exact(1) + Exact.pi(1)


def test_zero_absorbs_the_power_of_pi():
    assert Exact(0) + Exact.pi(3) == Exact.pi(3)
    assert Exact(0, 2).pi_power == 0


def test_products_and_quotients_track_the_power():
    product = Exact.pi(2) * Exact.pi(Fraction(1, 2))
    assert product.pi_power == 2
    assert product.value == 1
    assert Exact.pi(4) / Exact.pi(2) == 2
    assert Exact.pi(Fraction(4, 3)) * Fraction(3, 4) == Exact.pi(1)


def test_float_fallback():
    assert float(Exact.pi(1)) == math.pi
    assert Exact.pi(2) * 0.5 == pytest.approx(math.pi)


def test_reflected_division():
    assert Fraction(4) / Exact(2) == 2
    assert 0 / Exact.pi(1) == 0
    assert 2.0 / Exact.pi(1) == pytest.approx(2 / math.pi)
    with pytest.raises(ExactArithmeticError):
        Fraction(1) / Exact.pi(1)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("4/15*pi", Exact.pi(Fraction(4, 15))),
        ("-2", Exact(-2)),
        ("3*pi^2", Exact(3, 2)),
        ("0*pi", Exact(0)),
    ],
)
def test_parse(text, expected):
    assert Exact.parse(text) == expected


def test_parse_rejects_garbage():
    with pytest.raises(FormatError):
        Exact.parse("four pi")


def test_parse_rejects_zero_denominator():
    with pytest.raises(FormatError):
        Exact.parse("1/0")


def test_str_round_trips_through_parse():
    value = Exact.pi(Fraction(-8, 45))
    assert str(value) == "-8/45*pi"
    assert Exact.parse(str(value)) == value


def test_gaussian_rational_arithmetic():
    z = GaussianRational(1, 1)
    assert z * z.conjugate() == 2
    assert I * I == -1
    assert z.abs_squared() == 2
    assert (z + 1) == GaussianRational(2, 1)
    assert z / 2 == GaussianRational(Fraction(1, 2), Fraction(1, 2))
    assert complex(z) == 1 + 1j


def test_gaussian_rational_with_zero_imaginary_part_equals_fraction():
    assert GaussianRational(Fraction(3, 4)) == Fraction(3, 4)
    assert hash(GaussianRational(Fraction(3, 4))) == hash(Fraction(3, 4))
