import pytest

from torsionkummer.factored import FactoredInteger, prime_divisors, valuation


def test_from_int_roundtrip():
    x = FactoredInteger.from_int(2**5 * 3 * 7**2)
    assert x.factors == ((2, 5), (3, 1), (7, 2))
    assert x.to_int() == 2**5 * 3 * 7**2
    assert str(x) == "2^5 * 3 * 7^2"


def test_arithmetic():
    a = FactoredInteger.from_int(12)
    b = FactoredInteger.from_int(18)
    assert (a * b).to_int() == 216
    assert (a * 5).to_int() == 60
    assert a.gcd(b).to_int() == 6
    assert (a**3).to_int() == 1728
    assert (a**0).is_one()
    assert b.exact_div(FactoredInteger.from_int(6)).to_int() == 3
    assert FactoredInteger.from_int(6).divides(a)
    assert not a.divides(b)
    with pytest.raises(ValueError):
        a.exact_div(b)


def test_validation():
    with pytest.raises(ValueError):
        FactoredInteger.from_int(0)
    with pytest.raises(ValueError):
        FactoredInteger.from_exponents({4: 1})
    with pytest.raises(ValueError):
        FactoredInteger(((3, 1), (2, 1)))


def test_digit_cap():
    huge = FactoredInteger.prime_power(2, 100_000)
    with pytest.raises(OverflowError):
        huge.to_int()
    assert huge.digit_estimate() >= 30_103


def test_json_roundtrip():
    x = FactoredInteger.from_exponents({2: 24, 13: 12})
    assert x.to_json() == {"2": 24, "13": 12}
    assert FactoredInteger.from_json(x.to_json()) == x


def test_helpers():
    assert valuation(480, 2) == 5
    assert valuation(-18, 3) == 2
    with pytest.raises(ValueError):
        valuation(0, 2)
    assert prime_divisors(-7) == [7]
    assert prime_divisors(1) == []
