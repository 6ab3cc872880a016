import random

import pytest

from torsionkummer.divisibility import GeneratorMatrix, divisibility_parameter, saturation_membership, unimodular_inverse
from torsionkummer.errors import DimensionMismatch, RankZero
from torsionkummer.zmod import ZMatrix, det


def random_unimodular(rng: random.Random, n: int) -> ZMatrix:
    m = ZMatrix.identity(n)
    for _ in range(6):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        e = [[int(a == b) for b in range(n)] for a in range(n)]
        if i != j:
            e[i][j] = rng.randint(-3, 3)
        else:
            e[i][i] = -1
        m = m @ ZMatrix.from_rows(e)
    return m


def test_identity_is_saturated():
    res = divisibility_parameter(GeneratorMatrix.from_rows([[1, 0], [0, 1]]))
    assert res.d_A == 1 and res.divisors == (1, 1)


def test_diagonal_chain():
    g = GeneratorMatrix.from_rows([[2, 0], [0, 4]])
    res = divisibility_parameter(g)
    assert res.divisors == (2, 4) and res.d_A == 4 and res.rank == 2
    for i in range(res.rank):
        f = res.adapted_vector(i)
        assert saturation_membership(g, [res.divisors[i] * x for x in f]) == (True, True)
        assert saturation_membership(g, [res.d_A * x for x in f]) == (True, True)
    f2 = res.adapted_vector(1)
    assert saturation_membership(g, f2) == (False, True)


def test_single_column():
    res = divisibility_parameter(GeneratorMatrix.from_rows([[2], [0]]))
    assert res.divisors == (2,) and res.d_A == 2
    g = GeneratorMatrix.from_rows([[2], [0]])
    assert saturation_membership(g, [0, 1]) == (False, False)
    assert saturation_membership(g, [3, 0]) == (False, True)


def test_rank_zero():
    with pytest.raises(RankZero):
        divisibility_parameter(GeneratorMatrix.from_rows([[0, 0], [0, 0]]))


def test_membership_basics():
    g = GeneratorMatrix.from_rows([[2, 1], [0, 3], [4, 4]])
    for col in g.columns():
        assert saturation_membership(g, col) == (True, True)
    assert saturation_membership(g, [0, 0, 0]) == (True, True)
    with pytest.raises(DimensionMismatch):
        saturation_membership(g, [1, 0])


def test_adapted_basis_is_unimodular():
    rng = random.Random(8)
    for _ in range(20):
        g = GeneratorMatrix.from_rows([[rng.randint(-6, 6) for _ in range(3)] for _ in range(3)])
        try:
            res = divisibility_parameter(g)
        except RankZero:
            continue
        assert abs(det(res.adapted_basis)) == 1
        assert res.adapted_basis @ res.smith.P == ZMatrix.identity(3)
        for i, d in enumerate(res.divisors):
            assert saturation_membership(g, [d * x for x in res.adapted_vector(i)])[0]


def test_basis_change_invariance():
    rng = random.Random(9)
    g = GeneratorMatrix.from_rows([[2, 0, 6], [0, 4, 8], [0, 0, 0]])
    base = divisibility_parameter(g).divisors
    for _ in range(20):
        u = random_unimodular(rng, 3)
        w = random_unimodular(rng, 3)
        assert divisibility_parameter(GeneratorMatrix(u @ g.gens @ w)).divisors == base
    # a different generating set of the same column lattice
    alt = GeneratorMatrix.from_rows([[2, 2, 0, 6], [0, 4, 4, 8], [0, 0, 0, 0]])
    assert divisibility_parameter(alt).divisors == base


def test_unimodular_inverse_rejects():
    with pytest.raises(ValueError):
        unimodular_inverse(ZMatrix.from_rows([[2, 0], [0, 1]]))
