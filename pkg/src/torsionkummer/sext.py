"""Finite-level automorphisms of the full s-extension of a free group of rank r.

At level N the division group is modelled as
``Gamma_N = (1/N Z)^r ⊕ (1/N Z / Z)^s`` with ``A = Z^r``. Its group of
A-automorphisms is the semidirect product ``Mat_{s x r}(Z/N) ⋊ GL_s(Z/N)``:
a pair ``(D, C)`` sends a point with free numerators ``x`` and torsion
numerators ``t`` to ``(x, C t + D x)``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

from sympy import primefactors

from .errors import CapExceeded, NotADivisor, NotInvertible, ShapeMismatch
from .zmod import ZMatrix, det, inverse_mod

DEFAULT_ELEMENT_CAP = 10**6
DEFAULT_PAIR_BUDGET = 20_000
DEFAULT_SEED = 20240917


@dataclass(frozen=True)
class ExtensionShape:
    """``r`` = rank of A, ``s`` = torsion dimension, ``N`` = level."""

    r: int
    s: int
    N: int

    def __post_init__(self):
        if self.r < 1:
            raise ValueError(f"rank r must be positive, got {self.r}")
        if self.s < 0:
            raise ValueError(f"torsion dimension s must be non-negative, got {self.s}")
        if self.N < 1:
            raise ValueError(f"level N must be positive, got {self.N}")

    def at_level(self, n: int) -> ExtensionShape:
        return ExtensionShape(self.r, self.s, n)


@dataclass(frozen=True)
class DivisionPoint:
    """``sum x_i/N e_i + sum t_j/N f_j``: free numerators ``x`` in Z, torsion ``t`` mod N."""

    free_part: tuple[int, ...]
    torsion_part: tuple[int, ...]


@dataclass(frozen=True)
class TorsionKummerElement:
    D: ZMatrix
    C: ZMatrix
    shape: ExtensionShape

    def __post_init__(self):
        r, s, n = self.shape.r, self.shape.s, self.shape.N
        if self.D.shape != (s, r) or self.C.shape != (s, s):
            raise ShapeMismatch(f"expected D {s}x{r} and C {s}x{s}, got {self.D.shape} and {self.C.shape}")
        if self.D.modulus != n or self.C.modulus != n:
            raise ShapeMismatch(f"entries must be reduced mod {n}")
        if math.gcd(det(self.C), n) != 1:
            raise NotInvertible("torsion part C is not invertible")

    @classmethod
    def identity(cls, shape: ExtensionShape) -> TorsionKummerElement:
        return cls(ZMatrix.zeros(shape.s, shape.r, shape.N), ZMatrix.identity(shape.s, shape.N), shape)

    @classmethod
    def from_lists(cls, D, C, shape: ExtensionShape) -> TorsionKummerElement:
        return cls(
            ZMatrix.from_rows(D, shape.N, cols=shape.r),
            ZMatrix.from_rows(C, shape.N, cols=shape.s),
            shape,
        )

    def key(self) -> tuple:
        return (self.D.entries, self.C.entries)


def _element(D: ZMatrix, C: ZMatrix, shape: ExtensionShape) -> TorsionKummerElement:
    # results of group operations are well-formed by construction
    e = object.__new__(TorsionKummerElement)
    object.__setattr__(e, "D", D)
    object.__setattr__(e, "C", C)
    object.__setattr__(e, "shape", shape)
    return e


def _same_shape(a: TorsionKummerElement, b: TorsionKummerElement) -> None:
    if a.shape != b.shape:
        raise ShapeMismatch(f"{a.shape} vs {b.shape}")


def compose(a: TorsionKummerElement, b: TorsionKummerElement) -> TorsionKummerElement:
    """``a ∘ b = (D_a + C_a D_b, C_a C_b)``."""
    _same_shape(a, b)
    return _element(a.D + a.C @ b.D, a.C @ b.C, a.shape)


def invert(a: TorsionKummerElement) -> TorsionKummerElement:
    cinv = inverse_mod(a.C)
    return _element(-(cinv @ a.D), cinv, a.shape)


def apply(a: TorsionKummerElement, p: DivisionPoint) -> DivisionPoint:
    r, s, n = a.shape.r, a.shape.s, a.shape.N
    if len(p.free_part) != r or len(p.torsion_part) != s:
        raise ShapeMismatch(f"point has {len(p.free_part)}+{len(p.torsion_part)} coordinates, expected {r}+{s}")
    x = p.free_part
    t = p.torsion_part
    new_t = tuple(
        (sum(a.C.entries[i][j] * t[j] for j in range(s)) + sum(a.D.entries[i][j] * x[j] for j in range(r))) % n
        for i in range(s)
    )
    return DivisionPoint(tuple(x), new_t)


def restrict(a: TorsionKummerElement, n: int) -> TorsionKummerElement:
    """Restriction to ``Gamma_n`` for ``n | N``: reduce both blocks mod n."""
    if n < 1 or a.shape.N % n:
        raise NotADivisor(f"{n} does not divide the level {a.shape.N}")
    return _element(a.D.reduce(n), a.C.reduce(n), a.shape.at_level(n))


def gl_order(s: int, n: int) -> int:
    """``|GL_s(Z/n)|`` from the prime-power product formula."""
    if s == 0 or n == 1:
        return 1
    order = n ** (s * s)
    for p in primefactors(n):
        for i in range(1, s + 1):
            order = order * (p**i - 1) // p**i
    return order


def group_order(shape: ExtensionShape) -> int:
    return shape.N ** (shape.r * shape.s) * gl_order(shape.s, shape.N)


def all_matrices(rows: int, cols: int, n: int):
    for flat in itertools.product(range(n), repeat=rows * cols):
        yield ZMatrix.from_flat(flat, rows, cols, n)


def invertible_matrices(s: int, n: int) -> list[ZMatrix]:
    return [c for c in all_matrices(s, s, n) if math.gcd(det(c), n) == 1]


def enumerate_group(shape: ExtensionShape, cap: int = DEFAULT_ELEMENT_CAP) -> list[TorsionKummerElement]:
    expected = group_order(shape)
    if expected > cap or shape.N ** (shape.s * shape.s) > cap:
        raise CapExceeded(f"{shape} has {expected} elements, cap is {cap}")
    gl = invertible_matrices(shape.s, shape.N)
    return [TorsionKummerElement(d, c, shape) for d in all_matrices(shape.s, shape.r, shape.N) for c in gl]


def basis_points(shape: ExtensionShape) -> list[DivisionPoint]:
    """``e_i / N`` for the free part and ``f_j / N`` for the torsion part."""
    r, s = shape.r, shape.s
    pts = [DivisionPoint(tuple(int(i == k) for k in range(r)), (0,) * s) for i in range(r)]
    pts += [DivisionPoint((0,) * r, tuple(int(j == k) for k in range(s))) for j in range(s)]
    return pts


@dataclass
class VerificationReport:
    shape: ExtensionShape
    order: int
    expected_order: int
    gl_order: int
    kernel_order: int
    pairs_checked: int
    pairs_exhaustive: bool
    seed: int
    checks: dict[str, bool] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations and all(self.checks.values())

    def record(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks[name] = self.checks.get(name, True) and ok
        if not ok:
            self.violations.append(f"{name}: {detail}" if detail else name)

    def to_json(self) -> dict:
        return {
            "shape": {"r": self.shape.r, "s": self.shape.s, "N": self.shape.N},
            "order": self.order,
            "expected_order": self.expected_order,
            "gl_order": self.gl_order,
            "kernel_order": self.kernel_order,
            "pairs_checked": self.pairs_checked,
            "pairs_exhaustive": self.pairs_exhaustive,
            "seed": self.seed,
            "checks": dict(sorted(self.checks.items())),
            "violations": list(self.violations),
            "passed": self.passed,
        }


def _pairs(n: int, budget: int, rng: random.Random):
    if n * n <= budget:
        return list(itertools.product(range(n), repeat=2)), True
    return [(rng.randrange(n), rng.randrange(n)) for _ in range(budget)], False


def verify_exact_sequence(
    shape: ExtensionShape,
    cap: int = DEFAULT_ELEMENT_CAP,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
    seed: int = DEFAULT_SEED,
) -> VerificationReport:
    """Enumerate ``Aut_A(Gamma_N)`` and check ``0 -> Mat -> Aut -> GL_s -> 1``.

    Per-element checks (inverses, faithfulness, conjugation, fixing A) are
    exhaustive. Pairwise checks (closure, homomorphism, action law) are
    exhaustive when ``order**2 <= pair_budget``, otherwise run on a seeded
    sample of ``pair_budget`` pairs; associativity is always sampled.
    """
    rng = random.Random(seed)
    elems = enumerate_group(shape, cap)
    n_el = len(elems)
    r, s, N = shape.r, shape.s, shape.N
    gl = invertible_matrices(s, N)
    expected_gl = gl_order(s, N)
    pairs, exhaustive = _pairs(n_el, pair_budget, rng)
    rep = VerificationReport(
        shape=shape,
        order=n_el,
        expected_order=N ** (r * s) * expected_gl,
        gl_order=len(gl),
        kernel_order=0,
        pairs_checked=len(pairs),
        pairs_exhaustive=exhaustive,
        seed=seed,
    )
    rep.record("order_formula", n_el == rep.expected_order, f"{n_el} != {rep.expected_order}")
    rep.record("gl_count", len(gl) == expected_gl, f"{len(gl)} != {expected_gl}")

    ident = TorsionKummerElement.identity(shape)
    keys = {e.key(): i for i, e in enumerate(elems)}
    rep.record("distinct_elements", len(keys) == n_el)
    pts = basis_points(shape)
    a_points = [DivisionPoint(tuple(N * int(i == k) for k in range(r)), (0,) * s) for i in range(r)]

    tables = set()
    for e in elems:
        inv = invert(e)
        if compose(e, inv) != ident or compose(inv, e) != ident:
            rep.record("inverses", False, f"{e.key()}")
        if compose(ident, e) != e or compose(e, ident) != e:
            rep.record("identity", False, f"{e.key()}")
        if any(apply(e, p) != p for p in a_points):
            rep.record("fixes_A", False, f"{e.key()}")
        tables.add(tuple(apply(e, p) for p in pts))
    rep.record("inverses", True)
    rep.record("identity", True)
    rep.record("fixes_A", True)
    rep.record("faithful_action", len(tables) == n_el, f"{len(tables)} action tables for {n_el} elements")

    # projection (D, C) -> C: surjective onto GL_s, kernel = {(D, I)}
    image = {e.C.entries for e in elems}
    rep.record("projection_surjective", image == {c.entries for c in gl})
    kernel = [e for e in elems if e.C == ident.C]
    rep.kernel_order = len(kernel)
    rep.record("kernel_order", len(kernel) == N ** (r * s), f"{len(kernel)} != {N ** (r * s)}")
    kpairs, _ = _pairs(len(kernel), pair_budget, rng)
    for i, j in kpairs:
        a, b = kernel[i], kernel[j]
        ab = compose(a, b)
        if ab.D != a.D + b.D or ab.C != ident.C or ab != compose(b, a):
            rep.record("kernel_additive", False, f"{a.key()} {b.key()}")
    rep.record("kernel_additive", True)

    for i, j in pairs:
        a, b = elems[i], elems[j]
        ab = compose(a, b)
        if ab.key() not in keys:
            rep.record("closure", False, f"{a.key()} {b.key()}")
        if ab.C != a.C @ b.C:
            rep.record("projection_homomorphism", False, f"{a.key()} {b.key()}")
        if any(apply(ab, p) != apply(a, apply(b, p)) for p in pts):
            rep.record("action_law", False, f"{a.key()} {b.key()}")
    for name in ("closure", "projection_homomorphism", "action_law"):
        rep.record(name, True)

    for _ in range(min(pair_budget // 4, n_el**3)):
        a, b, c = (elems[rng.randrange(n_el)] for _ in range(3))
        if compose(compose(a, b), c) != compose(a, compose(b, c)):
            rep.record("associativity", False, f"{a.key()} {b.key()} {c.key()}")
    rep.record("associativity", True)

    # conjugating (D, I) by (0, C) is left multiplication by C
    zero_d = ZMatrix.zeros(s, r, N)
    for c in gl:
        lift = TorsionKummerElement(zero_d, c, shape)
        lift_inv = invert(lift)
        for k in kernel:
            conj = compose(compose(lift, k), lift_inv)
            if conj.D != c @ k.D or conj.C != ident.C:
                rep.record("conjugation_is_left_multiplication", False, f"C={c.entries} D={k.D.entries}")
    rep.record("conjugation_is_left_multiplication", True)

    for d in (d for d in range(1, N) if N % d == 0):
        restricted = {restrict(e, d).key() for e in elems}
        want = group_order(shape.at_level(d))
        rep.record(f"restriction_surjective[{d}]", len(restricted) == want, f"{len(restricted)} != {want}")
        for i, j in pairs[: min(len(pairs), 2000)]:
            a, b = elems[i], elems[j]
            if restrict(compose(a, b), d) != compose(restrict(a, d), restrict(b, d)):
                rep.record(f"restriction_homomorphism[{d}]", False, f"{a.key()} {b.key()}")
        rep.record(f"restriction_homomorphism[{d}]", True)
    return rep
