import math

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from torsionkummer.bounds import bad_primes_noncm, bound_general, bound_noncm, m_ell
from torsionkummer.divisibility import GeneratorMatrix, divisibility_parameter
from torsionkummer.errors import PrecisionInsufficient, RankZero
from torsionkummer.factored import FactoredInteger
from torsionkummer.lattice import (
    algebra_closure,
    entanglement_pipeline,
    index,
    joint_kernel,
    kernel_exponent,
    subgroup_closure,
)
from torsionkummer.oracle import brute_submodule_closure
from torsionkummer.records import ingest_record
from torsionkummer.sext import ExtensionShape, TorsionKummerElement, compose, invert, invertible_matrices, restrict
from torsionkummer.zmod import Subgroup, ZMatrix, det, elementary_divisors_via_minors, is_unimodular, snf

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23]


@st.composite
def int_matrices(draw, max_rows=4, max_cols=5, bound=20):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = draw(st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c), min_size=r, max_size=r))
    return ZMatrix.from_rows(rows, cols=c)


@st.composite
def small_shapes(draw):
    # N^{rs} <= 4096 so the BFS oracle stays cheap
    return draw(st.sampled_from([(1, 1, 8), (1, 1, 12), (2, 1, 4), (1, 2, 4), (2, 1, 6), (1, 2, 3), (2, 2, 2), (3, 1, 4)]))


@st.composite
def matrices_mod(draw, rows, cols, n):
    return [[draw(st.integers(0, n - 1)) for _ in range(cols)] for _ in range(rows)]


@st.composite
def closure_instances(draw):
    r, s, n = draw(small_shapes())
    shape = ExtensionShape(r, s, n)
    gens = [draw(matrices_mod(s, r, n)) for _ in range(draw(st.integers(0, 3)))]
    hs = []
    for _ in range(draw(st.integers(0, 2))):
        h = draw(matrices_mod(s, s, n))
        if math.gcd(det(ZMatrix.from_rows(h, n, cols=s)), n) == 1:
            hs.append(h)
    return shape, gens, hs


@given(int_matrices())
@SETTINGS
def test_snf_properties(m):
    res = snf(m)
    assert res.P @ m @ res.Q == res.D
    assert is_unimodular(res.P) and is_unimodular(res.Q)
    assert all(b % a == 0 for a, b in zip(res.divisors, res.divisors[1:]))
    assert all(d > 0 for d in res.divisors)
    assert res.divisors == elementary_divisors_via_minors(m)


@given(st.integers(1, 24), st.integers(1, 3), st.data())
@SETTINGS
def test_subgroup_order_index(n, dim, data):
    vecs = data.draw(st.lists(st.tuples(*[st.integers(0, n - 1)] * dim), max_size=4))
    g = Subgroup.generated_by(vecs, n, dim)
    assert g.order() * g.index() == n**dim
    assert all(g.contains(v) for v in vecs)
    assert Subgroup.generated_by(list(reversed(vecs)), n, dim) == g
    assert n % g.exponent() == 0
    assert len(set(g.elements())) == g.order()


@given(closure_instances())
@SETTINGS
def test_closure_matches_brute_force(inst):
    shape, gens, hs = inst
    fast = subgroup_closure(gens, hs, shape)
    assert fast == brute_submodule_closure(gens, hs, shape)
    assert subgroup_closure(fast.basis, hs, shape) == fast
    assert fast.is_stable_under([ZMatrix.from_rows(h, shape.N, cols=shape.s) for h in hs])
    assert index(fast).to_int() * fast.order() == shape.N ** (shape.r * shape.s)


@given(closure_instances(), st.data())
@SETTINGS
def test_closure_monotone(inst, data):
    shape, gens, hs = inst
    extra = data.draw(matrices_mod(shape.s, shape.r, shape.N))
    small = subgroup_closure(gens, hs, shape)
    big = subgroup_closure(gens + [extra], hs, shape)
    assert big.group.contains_subgroup(small.group)


@given(st.sampled_from([(2, 2), (2, 3), (3, 2), (5, 1)]), st.data())
@SETTINGS
def test_algebra_closure_is_closed(pk, data):
    ell, k = pk
    q = ell**k
    hs = []
    for _ in range(data.draw(st.integers(1, 3))):
        h = data.draw(matrices_mod(2, 2, q))
        if det(ZMatrix.from_rows(h, q, cols=2)) % ell:
            hs.append(h)
    assume(hs)
    res = algebra_closure(hs, ell, k)
    assert res.algebra.is_closed()
    assert all(res.algebra.contains(h) for h in hs)
    if res.exponent is not None:
        assert res.exponent < k


GL2_MOD12 = invertible_matrices(2, 12)


@st.composite
def group_elements(draw, shape):
    d = draw(matrices_mod(shape.s, shape.r, shape.N))
    return TorsionKummerElement(ZMatrix.from_rows(d, shape.N, cols=shape.r), draw(st.sampled_from(GL2_MOD12)), shape)


@given(st.data())
@SETTINGS
def test_group_laws(data):
    shape = ExtensionShape(data.draw(st.integers(1, 2)), 2, 12)
    a, b, c = (data.draw(group_elements(shape)) for _ in range(3))
    assert compose(compose(a, b), c) == compose(a, compose(b, c))
    assert compose(a, invert(a)) == TorsionKummerElement.identity(shape)
    for n in (2, 3, 4, 6):
        assert restrict(compose(a, b), n) == compose(restrict(a, n), restrict(b, n))
        assert restrict(restrict(a, 6), n if 6 % n == 0 else 1) == restrict(a, n if 6 % n == 0 else 1)


@given(st.integers(1, 10**6), st.integers(1, 10**6))
@SETTINGS
def test_factored_arithmetic(a, b):
    fa, fb = FactoredInteger.from_int(a), FactoredInteger.from_int(b)
    assert (fa * fb).to_int() == a * b
    assert fa.gcd(fb).to_int() == math.gcd(a, b)
    assert fa.divides(fb) == (b % a == 0)


@given(st.integers(1, 50), st.integers(1, 50), st.integers(1, 50), st.integers(1, 4), st.integers(0, 4))
@SETTINGS
def test_bound_general_homogeneity(d, n, m, r, s):
    assert bound_general(d, n, m, r, s) == bound_general(d, n, m, 1, 1) ** (r * s)
    assert bound_general(d, n, m, r, s).to_int() == (d * n * m) ** (r * s)


@given(st.sets(st.sampled_from(PRIMES)), st.sets(st.sampled_from(PRIMES)), st.sampled_from(PRIMES))
@SETTINGS
def test_m_ell_additive(a, b, ell):
    b = b - a
    assert m_ell(a | b, ell) == m_ell(a, ell) + m_ell(b, ell)


@st.composite
def noncm_records(draw):
    bad = sorted(draw(st.sets(st.sampled_from(PRIMES), max_size=3)))
    nonsurj = sorted(draw(st.sets(st.sampled_from(PRIMES), max_size=2)))
    disc = draw(st.sampled_from([1, -3, -4, 5, -7, 8, 13, -15]))
    growth = {p: draw(st.integers(2 if p == 2 else 1, 4)) for p in PRIMES}
    rho = draw(st.integers(1, 3))
    t = draw(st.integers(1, 3))
    gens = draw(st.lists(st.lists(st.integers(-6, 6), min_size=t, max_size=t), min_size=rho, max_size=rho))
    return ingest_record(
        {
            "label": "h",
            "field_degree": draw(st.integers(1, 4)),
            "disc_K": disc,
            "bad_reduction_primes": bad,
            "nonsurjective_primes": nonsurj,
            "growth_params": growth,
            "mw_rank": rho,
            "generators": gens,
        }
    )


@given(noncm_records())
@SETTINGS
def test_noncm_bound_structure(rec):
    bad = bad_primes_noncm(rec)
    assert {2, 3, 5} <= bad
    assert ingest_record(rec.to_json()) == rec
    try:
        rep = bound_noncm(rec)
    except RankZero:
        return
    assert rep.mismatches() == []
    inner_exps = {p: e // (2 * rep.rank) for p, e in rep.final_bound.exponents.items()}
    d_part = FactoredInteger.from_int(rep.d_A)
    for p in PRIMES:
        n, m = rep.per_prime_exponents.get(p, (0, 0))
        expected = (2 * n + m if p in bad else 0) + d_part.valuation(p)
        assert inner_exps.get(p, 0) == expected


@st.composite
def unimodular(draw, n):
    m = ZMatrix.identity(n)
    for _ in range(draw(st.integers(0, 6))):
        i, j = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        e = [[int(a == b) for b in range(n)] for a in range(n)]
        if i == j:
            e[i][i] = -1
        else:
            e[i][j] = draw(st.integers(-4, 4))
        m = m @ ZMatrix.from_rows(e)
    return m


@given(int_matrices(max_rows=3, max_cols=3, bound=8), st.data())
@SETTINGS
def test_divisibility_basis_invariance(m, data):
    try:
        base = divisibility_parameter(GeneratorMatrix(m))
    except RankZero:
        return
    u = data.draw(unimodular(m.rows))
    w = data.draw(unimodular(m.cols))
    moved = divisibility_parameter(GeneratorMatrix(u @ m @ w))
    assert moved.divisors == base.divisors and moved.d_A == base.d_A == base.divisors[-1]


@given(st.data())
@settings(max_examples=30, deadline=None)
def test_pipeline_crt_consistency(data):
    n = data.draw(st.sampled_from([6, 12, 18]))
    shape = ExtensionShape(data.draw(st.integers(1, 2)), 2, n)
    # a pair of opposite transvections I + cE_12, I + cE_21 plus random extras
    c = data.draw(st.sampled_from([1, 1, 2, 3]))
    hs = [[[1, c], [0, 1]], [[1, 0], [c, 1]]]
    for _ in range(data.draw(st.integers(0, 2))):
        h = data.draw(matrices_mod(2, 2, n))
        if math.gcd(det(ZMatrix.from_rows(h, n, cols=2)), n) == 1:
            hs.append(h)
    gens = [data.draw(matrices_mod(2, shape.r, n)) for _ in range(data.draw(st.integers(1, 2)))]
    V = subgroup_closure(gens, hs, shape)
    e = kernel_exponent(joint_kernel(V))
    d_A = data.draw(st.integers(1, 4))
    m = e // math.gcd(e, d_A)
    try:
        rep = entanglement_pipeline(V, hs, d_A, m)
    except PrecisionInsufficient:
        assume(False)
        return
    assert rep.divides and rep.crt_consistent and rep.descent_holds and rep.r_closure_contains
    assert rep.divides == all(c.divides for c in rep.components)
