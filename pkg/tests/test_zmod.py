import itertools
import random

import pytest

from torsionkummer.errors import DimensionMismatch, NotInvertible, OracleSizeLimit
from torsionkummer.zmod import (
    Subgroup,
    ZMatrix,
    crt_split,
    det,
    elementary_divisors_via_minors,
    image_mod,
    inverse_mod,
    is_unimodular,
    kernel_mod,
    snf,
)


def test_reduction_and_products():
    a = ZMatrix.from_rows([[5, -1], [9, 2]], 4)
    assert a.tolist() == [[1, 3], [1, 2]]
    b = ZMatrix.identity(2, 4)
    assert a @ b == a
    with pytest.raises(DimensionMismatch):
        a @ ZMatrix.identity(3, 4)
    with pytest.raises(DimensionMismatch):
        a @ ZMatrix.identity(2, 8)


def test_det_bareiss_matches_cofactor():
    m = ZMatrix.from_rows([[2, -3, 1], [4, 0, 7], [-1, 5, 2]])
    # cofactor expansion by hand: 2(0-35) + 3(8+7) + 1(20-0) = -70 + 45 + 20
    assert det(m) == -5


def test_snf_small_example():
    res = snf(ZMatrix.from_rows([[2, 4], [6, 8]]))
    # gcd of entries is 2 and |det| = 8, so the invariant factors are 2 and 4
    assert res.divisors == (2, 4)
    assert res.P @ ZMatrix.from_rows([[2, 4], [6, 8]]) @ res.Q == res.D
    assert is_unimodular(res.P) and is_unimodular(res.Q)


def test_snf_rank_deficient_and_zero():
    assert snf(ZMatrix.from_rows([[1, 2], [2, 4]])).divisors == (1,)
    assert snf(ZMatrix.zeros(2, 3)).divisors == ()
    assert snf(ZMatrix.from_rows([[0, 0, 6]])).divisors == (6,)


def test_snf_against_minors_random():
    rng = random.Random(7)
    for _ in range(100):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        m = ZMatrix.from_rows([[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)], cols=c)
        assert snf(m).divisors == elementary_divisors_via_minors(m)


def test_minors_oracle_size_limit():
    with pytest.raises(OracleSizeLimit):
        elementary_divisors_via_minors(ZMatrix.identity(6))


def test_inverse_mod():
    inv = inverse_mod(ZMatrix.from_rows([[1, 1], [0, 1]], 4))
    assert inv.tolist() == [[1, 3], [0, 1]]
    with pytest.raises(NotInvertible):
        inverse_mod(ZMatrix.from_rows([[2, 0], [0, 1]], 4))
    rng = random.Random(3)
    for _ in range(50):
        m = ZMatrix.from_rows([[rng.randrange(36) for _ in range(3)] for _ in range(3)], 36)
        try:
            inv = inverse_mod(m)
        except NotInvertible:
            continue
        assert m @ inv == ZMatrix.identity(3, 36)


def test_kernel_of_two_mod_eight():
    ker = kernel_mod(ZMatrix.from_rows([[2]], 8))
    assert sorted(ker.elements()) == [(0,), (4,)]


def test_kernel_and_image_brute_force():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.choice([4, 6, 9, 12])
        m = ZMatrix.from_rows([[rng.randrange(n) for _ in range(2)] for _ in range(2)], n)
        rows = m.tolist()
        brute = {v for v in itertools.product(range(n), repeat=2) if all(sum(a * b for a, b in zip(row, v)) % n == 0 for row in rows)}
        assert set(kernel_mod(m).elements()) == brute
        img = {tuple(sum(rows[i][j] * v[j] for j in range(2)) % n for i in range(2)) for v in itertools.product(range(n), repeat=2)}
        assert set(image_mod(m).elements()) == img


def test_subgroup_canonical_form():
    a = Subgroup.generated_by([(2, 0), (0, 2)], 4, 2)
    b = Subgroup.generated_by([(2, 2), (0, 2), (2, 0)], 4, 2)
    assert a == b
    assert a.order() == 4 and a.index() == 4 and a.exponent() == 2
    assert Subgroup.zero(6, 3).order() == 1
    assert Subgroup.full(6, 3).index() == 1
    assert a.contains((2, 2)) and not a.contains((1, 0))
    assert Subgroup.full(4, 2).contains_subgroup(a)


def test_subgroup_reduce():
    g = Subgroup.generated_by([(3, 0)], 12, 2)
    assert g.reduce(4) == Subgroup.generated_by([(3, 0)], 4, 2) == Subgroup.generated_by([(1, 0)], 4, 2)
    assert g.reduce(3) == Subgroup.zero(3, 2)


def test_crt_split():
    split = crt_split(36)
    assert split.factors == ((2, 2), (3, 2))
    assert split.moduli == [4, 9]
    assert split.reduce(23) == (3, 5)
    assert split.lift((3, 5)) == 23
    assert crt_split(1).factors == ()
