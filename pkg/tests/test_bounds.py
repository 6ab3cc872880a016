import pytest

from torsionkummer.bounds import (
    adelic_bound_mE,
    bad_primes_cm,
    bad_primes_noncm,
    bound_cm,
    bound_general,
    bound_noncm,
    cartan_exponent,
    cohomology_bound_mK,
    m_ell,
    ratio_divisor_table,
)
from torsionkummer.errors import CMOverBaseField, CMRecord, MissingCartanParams, MissingGrowthParam, NonCMRecord
from torsionkummer.factored import FactoredInteger
from torsionkummer.records import ingest_record

F = FactoredInteger.from_exponents


def noncm(disc=1, bad=(), nonsurj=(), growth=None, gens=((1,),), degree=1):
    return ingest_record(
        {
            "label": "t",
            "field_degree": degree,
            "disc_K": disc,
            "bad_reduction_primes": list(bad),
            "nonsurjective_primes": list(nonsurj),
            "growth_params": growth if growth is not None else {2: 2, 3: 1, 5: 1},
            "mw_rank": len(gens),
            "generators": [list(r) for r in gens],
        }
    )


def cm(conductor=1, ramified=(), bad=(), cartan=None, growth=None, in_K=False, gens=((1,),), degree=1):
    return ingest_record(
        {
            "label": "c",
            "field_degree": degree,
            "disc_K": 1,
            "bad_reduction_primes": list(bad),
            "cm": {"order_conductor": conductor, "ramified_primes": list(ramified), "cartan_params": cartan or {}, "cm_field_in_K": in_K},
            "growth_params": growth or {},
            "mw_rank": len(gens),
            "generators": [list(r) for r in gens],
        }
    )


def test_bad_primes_noncm():
    assert bad_primes_noncm(noncm(bad=[11], growth={})) == {2, 3, 5, 11}
    assert bad_primes_noncm(noncm(growth={})) == {2, 3, 5}
    assert bad_primes_noncm(noncm(disc=-7, bad=[2], nonsurj=[13], growth={})) == {2, 3, 5, 7, 13}
    with pytest.raises(CMRecord):
        bad_primes_noncm(cm())


def test_bad_primes_cm():
    assert bad_primes_cm(cm(ramified=[2, 5], bad=[5])) == {2, 5}
    assert bad_primes_cm(cm(conductor=6)) == {2, 3}
    assert bad_primes_cm(cm()) == frozenset()
    with pytest.raises(NonCMRecord):
        bad_primes_cm(noncm())


def test_m_ell():
    # v_2(6) + v_2(48) + v_2(480) and v_3 of the same three numbers
    assert m_ell({2, 3, 5}, 2) == 1 + 4 + 5 == 10
    assert m_ell({2, 3, 5}, 3) == 3
    assert m_ell(set(), 7) == 0
    assert m_ell({2, 3, 5, 11}, 2) == m_ell({2, 3, 5}, 2) + m_ell({11}, 2)
    with pytest.raises(ValueError):
        m_ell({2}, 4)


def test_adelic_bound_mE():
    growth = {2: 2, 3: 1, 5: 1}
    assert adelic_bound_mE({2, 3, 5}, growth, {2: 10, 3: 3, 5: 1}) == F({2: 12, 3: 4, 5: 2})
    assert adelic_bound_mE({2, 3, 5}, growth) == F({2: 12, 3: 4, 5: 2})
    assert adelic_bound_mE(set(), {}).is_one()
    assert adelic_bound_mE({3}, {3: 1}, {3: 0}) == F({3: 1})
    with pytest.raises(MissingGrowthParam) as exc:
        adelic_bound_mE({2, 7}, {2: 2})
    assert exc.value.prime == 7


def test_cohomology_bound_mK():
    assert cohomology_bound_mK(1) == F({2: 24, 3: 12, 5: 12, 7: 12, 13: 12})
    assert set(cohomology_bound_mK(1).exponents.values()) == {12, 24}
    # e_K = 24: l - 1 in {2, 4, 6, 12} gives primes; 3, 8, 24 give 4, 9, 25
    assert cohomology_bound_mK(2) == F({2: 48, 3: 24, 5: 24, 7: 24, 13: 24})
    with pytest.raises(ValueError):
        cohomology_bound_mK(0)


def test_cohomology_bound_brute_scan():
    for deg in range(1, 6):
        e = 12 * deg
        primes = [p for p in range(3, 2 * e) if all(p % q for q in range(2, p)) and e % (p - 1) == 0]
        assert cohomology_bound_mK(deg) == F({2: 2 * e, **{p: e for p in primes}})


def test_bound_noncm():
    rep = bound_noncm(noncm())
    assert rep.bad_primes == (2, 3, 5)
    assert rep.per_prime_exponents == {2: (2, 10), 3: (1, 3), 5: (1, 1)}
    inner = F({2: 14, 3: 5, 5: 3})
    assert rep.final_bound == inner**2
    assert rep.d_A == 1 and rep.rank == 1 and rep.torsion_dim == 2
    assert rep.mismatches() == []


def test_bound_noncm_rank_scaling():
    one = bound_noncm(noncm(gens=((1,), (0,))))
    two = bound_noncm(noncm(gens=((1, 0), (0, 1))))
    assert two.final_bound == one.final_bound**2


def test_bound_noncm_matches_general():
    rec = noncm(bad=[11], growth={2: 2, 3: 1, 5: 1, 11: 3}, gens=((2, 0), (0, 6)))
    rep = bound_noncm(rec)
    n = F({p: rec.growth_params[p] for p in rep.bad_primes})
    assert rep.final_bound == bound_general(rep.d_A, n, rep.adelic_constant, rep.rank, 2)


def test_bound_noncm_missing_growth():
    with pytest.raises(MissingGrowthParam):
        bound_noncm(noncm(bad=[11]))


def test_cartan_exponent():
    assert cartan_exponent(3, 5) == 0
    assert cartan_exponent(2, 2) == 3
    assert cartan_exponent(5, 0) == 0
    assert cartan_exponent(2, 0) == 0
    assert cartan_exponent(3, 9) == 2


def test_bound_cm():
    rec = cm(ramified=[2, 3], cartan={2: [1, 2], 3: [1, 0]}, growth={2: 2, 3: 1})
    rep = bound_cm(rec)
    assert rep.per_prime_exponents == {2: (2, 3), 3: (1, 0)}
    mk = cohomology_bound_mK(1)
    assert rep.m_K == mk
    assert rep.adelic_constant == mk * F({2: 5, 3: 1})
    assert rep.final_bound == rep.adelic_constant**2
    assert rep.mismatches() == []


def test_bound_cm_errors():
    with pytest.raises(CMOverBaseField):
        bound_cm(cm(in_K=True))
    with pytest.raises(NonCMRecord):
        bound_cm(noncm())
    with pytest.raises(MissingCartanParams):
        bound_cm(cm(ramified=[2], growth={2: 2}))
    with pytest.raises(MissingGrowthParam):
        bound_cm(cm(ramified=[2], cartan={2: [0, 1]}))


def test_bound_general():
    assert bound_general(1, 1, 1, 3, 2).is_one()
    assert bound_general(2, 3, 1, 1, 2) == F({2: 2, 3: 2})
    d, n, m = 6, F({2: 3}), F({3: 1, 5: 2})
    assert bound_general(d, n, m, 2, 3) == bound_general(d, n, m, 1, 1) ** 6


def test_ratio_table():
    rows = ratio_divisor_table(FactoredInteger.one(), 1, 2, [1, 2, 6])
    assert all(r.trivial and r.degree_multiple_of == r.full_degree for r in rows)
    bound = F({2: 3, 3: 1})
    rows = ratio_divisor_table(bound, 1, 2, [1, 4, 5, 6])
    assert rows[0].full_degree.is_one() and rows[0].ratio_divisor.is_one()
    assert rows[1].ratio_divisor == F({2: 3}) and rows[1].degree_multiple_of == F({2: 1})
    assert rows[2].trivial and rows[2].degree_multiple_of == F({5: 2})
    assert rows[3].ratio_divisor == F({2: 2, 3: 1})
    with pytest.raises(ValueError):
        ratio_divisor_table(bound, 1, 2, [])


def test_report_detects_tamper():
    rep = bound_noncm(noncm())
    rep.final_bound = rep.final_bound * 2
    assert any("final_bound" in m for m in rep.mismatches())
