"""Brute-force verifiers for the fast paths in :mod:`zmod`, :mod:`sext` and :mod:`lattice`.

Oracles enumerate elements literally and share only the canonical form of
subgroups with the code they check. Violations are collected into reports,
never raised, so one bug yields every witness at once.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CapExceeded, PrecisionInsufficient, PreconditionFailed
from .lattice import (
    Submodule,
    algebra_closure,
    contains_scaled_full,
    entanglement_pipeline,
    joint_kernel,
    kernel_exponent,
    r_module_closure,
    subgroup_closure,
    verify_move_vectors,
    verify_prop_kernel_bound,
)
from .sext import DEFAULT_ELEMENT_CAP, DEFAULT_SEED, ExtensionShape, verify_exact_sequence
from .zmod import Subgroup, ZMatrix, _leibniz_det, elementary_divisors_via_minors, is_unimodular, snf

DEFAULT_TRIALS = 100
Vec = tuple[int, ...]


@dataclass(frozen=True)
class OracleConfig:
    element_cap: int = DEFAULT_ELEMENT_CAP
    trial_count: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.element_cap < 1:
            raise ValueError("element_cap must be positive")
        if self.trial_count < 0:
            raise ValueError("trial_count must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


@dataclass
class OracleReport:
    name: str
    params: dict
    checked: int = 0
    violations: list[dict] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    elapsed: float = field(default=0.0, compare=False)

    @property
    def passed(self) -> bool:
        return not self.violations

    def violation(self, **witness) -> None:
        self.violations.append(witness)

    def to_json(self) -> dict:
        # elapsed is left out so reports stay byte-identical across runs
        return {
            "name": self.name,
            "params": self.params,
            "checked": self.checked,
            "passed": self.passed,
            "violations": self.violations,
            "stats": self.stats,
        }


def trial_rng(suite: str, seed: int, index: int) -> random.Random:
    """Independent stream per (suite, seed, trial)."""
    return random.Random(f"{suite}:{seed}:{index}")


def _check_cap(shape: ExtensionShape, cap: int) -> int:
    size = shape.N ** (shape.r * shape.s)
    if size > cap:
        raise CapExceeded(f"|Mat_{{{shape.s}x{shape.r}}}(Z/{shape.N})| = {size} exceeds cap {cap}")
    return size


def _flat(m, shape: ExtensionShape) -> Vec:
    rows = m.tolist() if isinstance(m, ZMatrix) else m
    return tuple(x % shape.N for row in rows for x in row)


def _mat(m, n: int) -> list[list[int]]:
    rows = m.tolist() if isinstance(m, ZMatrix) else m
    return [[x % n for x in row] for row in rows]


def _act(h: list[list[int]], v: Vec, s: int, r: int, n: int) -> Vec:
    return tuple(sum(h[i][k] * v[k * r + j] for k in range(s)) % n for i in range(s) for j in range(r))


def _add(a: Vec, b: Vec, n: int) -> Vec:
    return tuple((x + y) % n for x, y in zip(a, b))


def _span(seeds: Iterable[Vec], n: int, dim: int) -> frozenset[Vec]:
    """Additive closure of ``seeds`` by breadth-first search."""
    seeds = list(set(seeds))
    seen = {(0,) * dim}
    frontier = [(0,) * dim]
    while frontier:
        nxt = []
        for x in frontier:
            for g in seeds:
                y = _add(x, g, n)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def _as_submodule(elements: Iterable[Vec], shape: ExtensionShape) -> Submodule:
    elements = list(elements)
    group = Subgroup.generated_by(elements, shape.N, shape.r * shape.s)
    assert group.order() == len(elements), "element set is not a subgroup"
    return Submodule(shape, group)


def brute_submodule_closure(
    generators: Sequence, action_gens: Sequence, shape: ExtensionShape, cap: int = DEFAULT_ELEMENT_CAP
) -> Submodule:
    """H-orbit of the generators by BFS, then the literal set of all their sums."""
    _check_cap(shape, cap)
    s, r, n = shape.s, shape.r, shape.N
    hs = [_mat(h, n) for h in action_gens]
    orbit = {_flat(g, shape) for g in generators}
    frontier = list(orbit)
    while frontier:
        nxt = []
        for v in frontier:
            for h in hs:
                w = _act(h, v, s, r, n)
                if w not in orbit:
                    orbit.add(w)
                    nxt.append(w)
        frontier = nxt
    return _as_submodule(_span(orbit, n, r * s), shape)


def _all_vectors(n: int, dim: int) -> Iterable[Vec]:
    return itertools.product(range(n), repeat=dim)


def enumerate_subgroup_sets(n: int, dim: int) -> list[frozenset[Vec]]:
    """Every subgroup of ``(Z/n)^dim`` as an element set: joins of cyclic subgroups."""
    cyclic = {_span([v], n, dim) for v in _all_vectors(n, dim)}
    found = {frozenset([(0,) * dim])}
    frontier = list(found)
    while frontier:
        nxt = []
        for a in frontier:
            for c in cyclic:
                if c <= a:
                    continue
                j = frozenset(_add(x, y, n) for x in a for y in c)
                if j not in found:
                    found.add(j)
                    nxt.append(j)
        frontier = nxt
    return sorted(found, key=lambda e: (len(e), sorted(e)))


def _stable(elements: frozenset[Vec], hs: list[list[list[int]]], shape: ExtensionShape) -> bool:
    s, r, n = shape.s, shape.r, shape.N
    return all(_act(h, v, s, r, n) in elements for h in hs for v in elements)


def _elementary(s: int) -> list[list[list[int]]]:
    return [[[int((i, j) == (a, b)) for j in range(s)] for i in range(s)] for a in range(s) for b in range(s)]


def enumerate_submodules(
    shape: ExtensionShape, filter: str | Sequence = "all", cap: int = DEFAULT_ELEMENT_CAP
) -> list[Submodule]:
    """All subgroups of ``Mat_{s x r}(Z/N)``, optionally only the R-stable or H-stable ones.

    ``filter`` is ``"all"``, ``"r-stable"``, or a list of ``s x s`` action generators.
    """
    _check_cap(shape, cap)
    if filter == "all":
        hs = []
    elif filter == "r-stable":
        hs = _elementary(shape.s)
    elif isinstance(filter, str):
        raise ValueError(f"unknown filter {filter!r}")
    else:
        hs = [_mat(h, shape.N) for h in filter]
    sets = enumerate_subgroup_sets(shape.N, shape.r * shape.s)
    return [_as_submodule(e, shape) for e in sets if _stable(e, hs, shape)]


def _brute_kernel_exponent(elements: frozenset[Vec], shape: ExtensionShape) -> int:
    s, r, n = shape.s, shape.r, shape.N
    e = 1
    for x in _all_vectors(n, r):
        if all(sum(f[i * r + j] * x[j] for j in range(r)) % n == 0 for f in elements for i in range(s)):
            e = math.lcm(e, n // math.gcd(n, *x))
    return e


def _scaled_basis(c: int, shape: ExtensionShape) -> list[Vec]:
    k = shape.r * shape.s
    return [tuple(c * int(i == j) % shape.N for j in range(k)) for i in range(k)]


def exhaustive_kernel_containment(shape: ExtensionShape, cap: int = DEFAULT_ELEMENT_CAP) -> OracleReport:
    """Every R-stable submodule contains ``n M`` for ``n`` the exponent of its joint kernel."""
    t0 = time.perf_counter()
    _check_cap(shape, cap)
    rep = OracleReport("kernel_containment_exhaustive", {"r": shape.r, "s": shape.s, "N": shape.N})
    hs = _elementary(shape.s)
    sets = enumerate_subgroup_sets(shape.N, shape.r * shape.s)
    rep.stats["subgroups"] = len(sets)
    r_stable = [e for e in sets if _stable(e, hs, shape)]
    rep.stats["r_stable"] = len(r_stable)
    for e in r_stable:
        rep.checked += 1
        n = _brute_kernel_exponent(e, shape)
        holds = all(v in e for v in _scaled_basis(n, shape))
        V = _as_submodule(e, shape)
        fast = verify_prop_kernel_bound(V)
        if not holds:
            rep.violation(kind="containment", submodule=V.group.hnf, kernel_exponent=n)
        if (fast.kernel_exponent, fast.holds) != (n, holds):
            rep.violation(kind="fast_path_mismatch", submodule=V.group.hnf, oracle=[n, holds], fast=[fast.kernel_exponent, fast.holds])
    rep.elapsed = time.perf_counter() - t0
    return rep


def count_invertible(s: int, n: int) -> int:
    """``|GL_s(Z/n)|`` by iterating over every matrix."""
    if n == 1:
        return 1
    count = 0
    for flat in itertools.product(range(n), repeat=s * s):
        rows = [flat[i * s : (i + 1) * s] for i in range(s)]
        if math.gcd(_leibniz_det(rows) if s else 1, n) == 1:
            count += 1
    return count


def exhaustive_exact_sequence(shape: ExtensionShape, cap: int = DEFAULT_ELEMENT_CAP, seed: int = DEFAULT_SEED) -> OracleReport:
    t0 = time.perf_counter()
    if shape.N ** (shape.s * shape.s) > cap:
        raise CapExceeded(f"GL_{shape.s}(Z/{shape.N}) enumeration exceeds cap {cap}")
    rep = OracleReport("exact_sequence", {"r": shape.r, "s": shape.s, "N": shape.N, "seed": seed})
    ver = verify_exact_sequence(shape, cap=cap, seed=seed)
    direct = count_invertible(shape.s, shape.N)
    expected = shape.N ** (shape.r * shape.s) * direct
    rep.checked = 1
    rep.stats = {"order": ver.order, "gl_direct": direct, "expected_order": expected, "pairs_exhaustive": ver.pairs_exhaustive}
    for v in ver.violations:
        rep.violation(kind="structure", detail=v)
    if not ver.passed and not ver.violations:
        rep.violation(kind="structure", detail="a check failed without a recorded witness")
    if ver.order != expected or ver.gl_order != direct:
        rep.violation(kind="order", order=ver.order, expected=expected, gl=ver.gl_order, gl_direct=direct)
    rep.elapsed = time.perf_counter() - t0
    return rep


def closure_equivalence(shape: ExtensionShape, config: OracleConfig = OracleConfig()) -> OracleReport:
    """``subgroup_closure`` against the BFS oracle on random instances."""
    t0 = time.perf_counter()
    _check_cap(shape, config.element_cap)
    rep = OracleReport("closure_equivalence", {"r": shape.r, "s": shape.s, "N": shape.N, "seed": config.seed, "trials": config.trial_count})
    n = shape.N
    for i in range(config.trial_count):
        rng = trial_rng(rep.name, config.seed, i)
        gens = [_random_matrix(rng, shape.s, shape.r, n) for _ in range(rng.randint(0, 2))]
        hs = [_random_matrix(rng, shape.s, shape.s, n, invertible=True) for _ in range(rng.randint(0, 2))]
        fast = subgroup_closure(gens, hs, shape)
        brute = brute_submodule_closure(gens, hs, shape, config.element_cap)
        rep.checked += 1
        if fast != brute:
            rep.violation(trial=i, generators=gens, action=hs, fast=fast.group.hnf, oracle=brute.group.hnf)
    rep.elapsed = time.perf_counter() - t0
    return rep


# ------------------------------------------------------- randomized suites


def _random_matrix(rng: random.Random, rows: int, cols: int, n: int, invertible: bool = False) -> list[list[int]]:
    while True:
        m = [[rng.randrange(n) for _ in range(cols)] for _ in range(rows)]
        if not invertible or n == 1 or math.gcd(_leibniz_det(m) if rows else 1, n) == 1:
            return m


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _random_action(rng: random.Random, s: int, n: int, congruence: int) -> list[list[list[int]]]:
    """Random invertible generators; with ``congruence > 1`` they are ``I + c X``."""
    count = rng.randint(1, 3)
    if congruence == 1:
        return [_random_matrix(rng, s, s, n, invertible=True) for _ in range(count)]
    out = []
    while len(out) < count:
        x = _random_matrix(rng, s, s, n)
        h = [[(int(i == j) + congruence * x[i][j]) % n for j in range(s)] for i in range(s)]
        if math.gcd(_leibniz_det(h), n) == 1:
            out.append(h)
    return out


MAX_RESAMPLES = 200


def randomized_move_vectors_suite(
    config: OracleConfig = OracleConfig(),
    cases: Sequence[tuple[int, int]] = ((2, 4), (3, 3)),
    s: int = 2,
    ranks: Sequence[int] = (1, 2),
) -> OracleReport:
    """Random instances satisfying the hypotheses of the move-vectors bound.

    Each trial draws ``(l, k)`` and ``r``, an action ``H`` (sometimes a
    congruence subgroup so that the algebra exponent is positive) and a
    closure ``V``; ``n`` and ``m`` are the least values meeting the
    hypotheses. Draws violating ``k > n + m`` are resampled.
    """
    t0 = time.perf_counter()
    rep = OracleReport(
        "move_vectors_randomized",
        {"cases": [list(c) for c in cases], "s": s, "ranks": list(ranks), "seed": config.seed, "trials": config.trial_count},
    )
    resamples = 0
    brute_checked = 0
    for i in range(config.trial_count):
        rng = trial_rng(rep.name, config.seed, i)
        for _ in range(MAX_RESAMPLES):
            ell, k = cases[rng.randrange(len(cases))]
            r = ranks[rng.randrange(len(ranks))]
            q = ell**k
            shape = ExtensionShape(r, s, q)
            hs = _random_action(rng, s, q, ell ** rng.randint(0, 1))
            alg = algebra_closure(hs, ell, k, s)
            if alg.exponent is None:
                resamples += 1
                continue
            m = alg.exponent
            gens = [[[ell ** rng.randint(0, 1) * x for x in row] for row in _random_matrix(rng, s, r, q)] for _ in range(rng.randint(1, 2))]
            V = subgroup_closure(gens, hs, shape)
            W = r_module_closure(V)
            n = next(e for e in range(k + 1) if contains_scaled_full(W, ell**e))
            if k <= n + m:
                resamples += 1
                continue
            break
        else:
            rep.violation(trial=i, kind="no_instance", detail=f"no admissible instance after {MAX_RESAMPLES} draws")
            continue
        rep.checked += 1
        try:
            ok = verify_move_vectors(V, hs, n, m)
        except PreconditionFailed as exc:
            rep.violation(trial=i, kind="precondition", detail=str(exc))
            continue
        # literal re-check of the conclusion on groups small enough to list
        if q ** (r * s) <= 4096:
            brute = brute_submodule_closure(gens, hs, shape)
            brute_checked += 1
            if brute != V:
                rep.violation(trial=i, kind="closure_mismatch", prime=ell, precision=k, r=r)
            ok_brute = all(brute.group.contains(v) for v in _scaled_basis(ell ** (n + m), shape))
            if ok_brute != ok:
                rep.violation(trial=i, kind="fast_path_mismatch", oracle=ok_brute, fast=ok)
        if not ok:
            rep.violation(trial=i, kind="containment", prime=ell, precision=k, r=r, n=n, m=m, action=hs, generators=gens)
    rep.stats = {"resamples": resamples, "brute_force_rechecks": brute_checked}
    rep.elapsed = time.perf_counter() - t0
    return rep


def randomized_pipeline_suite(config: OracleConfig = OracleConfig(), shape: ExtensionShape = ExtensionShape(2, 2, 36)) -> OracleReport:
    """Synthetic instances of the general bound: random action, random closure, consistent ``d_A`` and ``m``.

    ``d_A`` is drawn freely and ``m`` is chosen so that the joint-kernel
    exponent divides ``d_A * m``. Draws whose algebra closure cannot be
    certified at the working precision are resampled.
    """
    t0 = time.perf_counter()
    rep = OracleReport("pipeline_randomized", {"r": shape.r, "s": shape.s, "N": shape.N, "seed": config.seed, "trials": config.trial_count})
    n, s, r = shape.N, shape.s, shape.r
    divs = _divisors(n)
    resamples = 0
    nontrivial = 0
    for i in range(config.trial_count):
        rng = trial_rng(rep.name, config.seed, i)
        for _ in range(MAX_RESAMPLES):
            hs = _random_action(rng, s, n, rng.choice([1, 1, 6]))
            gens = [[[rng.choice(divs) * x for x in row] for row in _random_matrix(rng, s, r, n)] for _ in range(rng.randint(1, 3))]
            V = subgroup_closure(gens, hs, shape)
            e = kernel_exponent(joint_kernel(V))
            d_A = rng.randint(1, 6)
            m = e // math.gcd(e, d_A) * rng.randint(1, 3)
            try:
                res = entanglement_pipeline(V, hs, d_A, m)
            except PrecisionInsufficient:
                resamples += 1
                continue
            break
        else:
            rep.violation(trial=i, kind="no_instance", detail=f"no admissible instance after {MAX_RESAMPLES} draws")
            continue
        rep.checked += 1
        if not res.index.is_one():
            nontrivial += 1
        for flag in ("divides", "crt_consistent", "r_closure_contains", "descent_holds"):
            if not getattr(res, flag):
                rep.violation(trial=i, kind=flag, d_A=d_A, m=m, index=res.index.to_json(), bound=res.bound.to_json(), action=hs, generators=gens)
    rep.stats = {"resamples": resamples, "nontrivial_index": nontrivial}
    rep.elapsed = time.perf_counter() - t0
    return rep


def snf_oracle_suite(
    config: OracleConfig = OracleConfig(trial_count=200), max_rows: int = 4, max_cols: int = 5, bound: int = 20
) -> OracleReport:
    """Smith form against gcd-of-minors, plus ``P M Q = D`` and unimodularity."""
    t0 = time.perf_counter()
    rep = OracleReport("snf_oracle", {"max_rows": max_rows, "max_cols": max_cols, "entry_bound": bound, "seed": config.seed, "trials": config.trial_count})
    for i in range(config.trial_count):
        rng = trial_rng(rep.name, config.seed, i)
        rows, cols = rng.randint(1, max_rows), rng.randint(1, max_cols)
        m = ZMatrix.from_rows([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], cols=cols)
        res = snf(m)
        rep.checked += 1
        oracle = elementary_divisors_via_minors(m)
        if res.divisors != oracle:
            rep.violation(trial=i, kind="divisors", matrix=m.tolist(), fast=list(res.divisors), oracle=list(oracle))
        if res.P @ m @ res.Q != res.D:
            rep.violation(trial=i, kind="not_diagonal", matrix=m.tolist())
        if not (is_unimodular(res.P) and is_unimodular(res.Q)):
            rep.violation(trial=i, kind="not_unimodular", matrix=m.tolist())
    rep.elapsed = time.perf_counter() - t0
    return rep


EXACT_SEQUENCE_SHAPES = ((1, 1, 4), (1, 2, 2), (2, 1, 3), (2, 1, 4), (1, 2, 4))
KERNEL_BOUND_SHAPES = ((1, 1, 8), (2, 1, 4), (1, 2, 4))


def run_battery(config: OracleConfig = OracleConfig()) -> list[OracleReport]:
    """The full oracle battery in a fixed order."""
    reports = [exhaustive_exact_sequence(ExtensionShape(*sh), config.element_cap, config.seed) for sh in EXACT_SEQUENCE_SHAPES]
    reports += [exhaustive_kernel_containment(ExtensionShape(*sh), config.element_cap) for sh in KERNEL_BOUND_SHAPES]
    reports.append(closure_equivalence(ExtensionShape(1, 1, 8), config))
    reports.append(closure_equivalence(ExtensionShape(2, 1, 4), config))
    reports.append(snf_oracle_suite(OracleConfig(config.element_cap, 2 * config.trial_count, config.seed)))
    reports.append(randomized_move_vectors_suite(config))
    reports.append(randomized_pipeline_suite(config))
    return reports
