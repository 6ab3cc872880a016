"""Submodules of ``M = Mat_{s x r}(Z/N)`` under left multiplication.

Matrices are flattened row-major into ``(Z/N)^{s r}`` and stored as a
canonical :class:`~torsionkummer.zmod.Subgroup`. The action of ``s x s``
matrices is always on the left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .bounds import bound_general
from .errors import DimensionMismatch, NotInvertible, NotRStable, PrecisionInsufficient, PreconditionFailed
from .factored import FactoredInteger, valuation
from .sext import ExtensionShape
from .zmod import Subgroup, ZMatrix, crt_split, det, kernel_mod


def left_multiply(h: ZMatrix, v: Sequence[int], s: int, r: int, n: int) -> tuple[int, ...]:
    """``h @ v`` for ``v`` a flattened ``s x r`` matrix."""
    he = h.entries
    return tuple(
        sum(he[i][k] * v[k * r + j] for k in range(s)) % n for i in range(s) for j in range(r)
    )


def elementary_matrices(s: int, n: int) -> list[ZMatrix]:
    out = []
    for a in range(s):
        for b in range(s):
            out.append(ZMatrix.from_rows([[int((i, j) == (a, b)) for j in range(s)] for i in range(s)], n, cols=s))
    return out


def _flatten(mat: ZMatrix, shape: ExtensionShape) -> tuple[int, ...]:
    if mat.shape != (shape.s, shape.r):
        raise DimensionMismatch(f"expected a {shape.s}x{shape.r} matrix, got {mat.rows}x{mat.cols}")
    return tuple(x % shape.N for x in mat.flat())


def _as_matrix(m, n: int, rows: int, cols: int) -> ZMatrix:
    if isinstance(m, ZMatrix):
        if m.shape != (rows, cols):
            raise DimensionMismatch(f"expected a {rows}x{cols} matrix, got {m.rows}x{m.cols}")
        return m.reduce(n) if m.modulus != n else m
    return ZMatrix.from_rows(m, n, cols=cols)


@dataclass(frozen=True)
class Submodule:
    """A subgroup ``V`` of ``Mat_{s x r}(Z/N)``; equality ignores the witness."""

    shape: ExtensionShape
    group: Subgroup
    stability_witness: tuple[ZMatrix, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.group.modulus != self.shape.N or self.group.dim != self.shape.r * self.shape.s:
            raise DimensionMismatch("subgroup does not live in Mat_{s x r}(Z/N)")

    @classmethod
    def from_matrices(cls, shape: ExtensionShape, mats: Iterable) -> Submodule:
        vecs = [_flatten(_as_matrix(m, shape.N, shape.s, shape.r), shape) for m in mats]
        return cls(shape, Subgroup.generated_by(vecs, shape.N, shape.r * shape.s))

    @classmethod
    def zero(cls, shape: ExtensionShape) -> Submodule:
        return cls(shape, Subgroup.zero(shape.N, shape.r * shape.s))

    @classmethod
    def full(cls, shape: ExtensionShape) -> Submodule:
        return cls(shape, Subgroup.full(shape.N, shape.r * shape.s))

    @classmethod
    def scaled_full(cls, shape: ExtensionShape, c: int) -> Submodule:
        """``c M``."""
        k = shape.r * shape.s
        return cls(shape, Subgroup.generated_by([tuple(c * int(i == j) for j in range(k)) for i in range(k)], shape.N, k))

    @property
    def basis(self) -> list[ZMatrix]:
        return [ZMatrix.from_flat(g, self.shape.s, self.shape.r, self.shape.N) for g in self.group.generators()]

    def contains(self, mat) -> bool:
        return self.group.contains(_flatten(_as_matrix(mat, self.shape.N, self.shape.s, self.shape.r), self.shape))

    def order(self) -> int:
        return self.group.order()

    def is_stable_under(self, action_gens: Iterable[ZMatrix]) -> bool:
        s, r, n = self.shape.s, self.shape.r, self.shape.N
        gens = self.group.generators()
        return all(self.group.contains(left_multiply(h, v, s, r, n)) for h in action_gens for v in gens)

    def reduce(self, n: int) -> Submodule:
        """Image in ``Mat_{s x r}(Z/n)`` for ``n | N``."""
        return Submodule(self.shape.at_level(n), self.group.reduce(n))


def _saturate(group: Subgroup, action: Sequence[ZMatrix], s: int, r: int) -> Subgroup:
    n = group.modulus
    queue = list(group.generators())
    while queue:
        v = queue.pop()
        fresh = []
        for h in action:
            w = left_multiply(h, v, s, r, n)
            if not group.contains(w):
                group = group.with_vectors([w])
                fresh.append(w)
        queue.extend(fresh)
    return group


def subgroup_closure(generators: Iterable, action_gens: Iterable, shape: ExtensionShape) -> Submodule:
    """Smallest subgroup containing ``generators`` and stable under left multiplication by ``action_gens``."""
    action = tuple(_as_matrix(h, shape.N, shape.s, shape.s) for h in action_gens)
    start = Submodule.from_matrices(shape, generators)
    group = _saturate(start.group, action, shape.s, shape.r)
    return Submodule(shape, group, action)


def r_module_closure(V: Submodule) -> Submodule:
    """``R V`` for ``R = Mat_{s x s}(Z/N)``."""
    action = elementary_matrices(V.shape.s, V.shape.N)
    return Submodule(V.shape, _saturate(V.group, action, V.shape.s, V.shape.r), tuple(action))


def is_r_stable(V: Submodule) -> bool:
    return V.is_stable_under(elementary_matrices(V.shape.s, V.shape.N))


def joint_kernel(V: Submodule) -> Subgroup:
    """``{x in (Z/N)^r : f x = 0 for every f in V}``."""
    rows = [row for b in V.basis for row in b.tolist()]
    return kernel_mod(ZMatrix.from_rows(rows, V.shape.N, cols=V.shape.r))


def kernel_exponent(kernel: Subgroup) -> int:
    return kernel.exponent()


def contains_scaled_full(V: Submodule, c: int) -> bool:
    """Whether ``c * E_ij`` lies in ``V`` for every elementary matrix."""
    if c < 1:
        raise ValueError(f"scale must be positive, got {c}")
    k = V.shape.r * V.shape.s
    return all(V.group.contains(tuple(c * int(i == j) for j in range(k))) for i in range(k))


def index(V: Submodule) -> FactoredInteger:
    """``[M : V] = N^{rs} / |V|``."""
    return V.group.factored_index()


# ---------------------------------------------------------- matrix algebras


@dataclass(frozen=True)
class MatrixAlgebra:
    """A unital subring of ``Mat_{s x s}(Z/l^k)``, stored as an additive subgroup."""

    prime: int
    precision: int
    size: int
    group: Subgroup

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    @property
    def basis(self) -> list[ZMatrix]:
        return [ZMatrix.from_flat(g, self.size, self.size, self.modulus) for g in self.group.generators()]

    def contains(self, mat) -> bool:
        m = _as_matrix(mat, self.modulus, self.size, self.size)
        return self.group.contains(m.flat())

    def is_closed(self) -> bool:
        """Identity present and every product of basis elements back in the span."""
        basis = self.basis
        if not self.contains(ZMatrix.identity(self.size, self.modulus)):
            return False
        return all(self.contains(a @ b) for a in basis for b in basis)


@dataclass(frozen=True)
class AlgebraClosure:
    algebra: MatrixAlgebra
    exponent: int | None  # None: no l^m Mat with m < k certified at this precision

    @property
    def sufficient(self) -> bool:
        return self.exponent is not None


def algebra_closure(action_gens: Iterable, ell: int, k: int, s: int | None = None) -> AlgebraClosure:
    """The Z/l^k-span of all words in ``action_gens`` and the least ``m`` with ``l^m Mat ⊆ S``.

    ``m`` is reported only when ``m < k``; a truncation mod ``l^k`` cannot
    certify anything at or beyond its own precision.
    """
    if k < 1:
        raise ValueError("precision must be at least 1")
    n = ell**k
    gens = list(action_gens)
    if s is None:
        if not gens:
            raise ValueError("cannot infer the matrix size from an empty generator list")
        s = len(gens[0]) if not isinstance(gens[0], ZMatrix) else gens[0].rows
    action = [_as_matrix(h, n, s, s) for h in gens]
    for h in action:
        if math.gcd(det(h), ell) != 1:
            raise NotInvertible(f"generator {h.entries} is not invertible mod {ell}")
    ident = ZMatrix.identity(s, n)
    span = _saturate(Subgroup.generated_by([ident.flat()], n, s * s), action, s, s)
    alg = MatrixAlgebra(ell, k, s, span)
    exponent = None
    for m in range(k):
        c = ell**m
        if all(span.contains(tuple(c * int(i == j) for j in range(s * s))) for i in range(s * s)):
            exponent = m
            break
    return AlgebraClosure(alg, exponent)


# ------------------------------------------------------- verified engines


@dataclass(frozen=True)
class KernelBoundResult:
    kernel_exponent: int
    holds: bool


def verify_prop_kernel_bound(V: Submodule, must_be_r_stable: bool = True) -> KernelBoundResult:
    """For an R-stable ``V`` with joint kernel of exponent ``n``, check ``V ⊇ n M``.

    A ``False`` here is an implementation bug, not a mathematical outcome.
    """
    if must_be_r_stable and not is_r_stable(V):
        raise NotRStable("V is not stable under left multiplication by Mat_{s x s}")
    n = kernel_exponent(joint_kernel(V))
    return KernelBoundResult(n, contains_scaled_full(V, n))


def prime_power(n: int) -> tuple[int, int]:
    split = crt_split(n)
    if len(split.factors) != 1:
        raise PreconditionFailed("modulus is a prime power", f"N = {n}")
    return split.factors[0]


def verify_move_vectors(V: Submodule, action_gens: Sequence, n: int, m: int) -> bool:
    """With ``R V ⊇ l^n M`` and ``S ⊇ l^m R``, check ``V ⊇ l^{n+m} M``."""
    ell, k = prime_power(V.shape.N)
    action = [_as_matrix(h, V.shape.N, V.shape.s, V.shape.s) for h in action_gens]
    if not V.is_stable_under(action):
        raise PreconditionFailed("V is closed under the action generators")
    if not contains_scaled_full(r_module_closure(V), ell**n):
        raise PreconditionFailed("R V contains l^n M", f"l={ell}, n={n}")
    alg = algebra_closure(action, ell, k, V.shape.s)
    if alg.exponent is None or alg.exponent > m:
        raise PreconditionFailed("algebra generated by H contains l^m Mat", f"exponent {alg.exponent}, m={m}")
    if k <= n + m:
        raise PreconditionFailed("precision k exceeds n + m", f"k={k}, n+m={n + m}")
    return contains_scaled_full(V, ell ** (n + m))


@dataclass
class PrimeStep:
    prime: int
    precision: int
    algebra_exponent: int
    descent_exponent: int  # v_l(d_A m) + algebra exponent
    descent_holds: bool
    local_index: FactoredInteger

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "precision": self.precision,
            "algebra_exponent": self.algebra_exponent,
            "descent_exponent": self.descent_exponent,
            "descent_holds": self.descent_holds,
            "local_index": self.local_index.to_json(),
        }


@dataclass
class PipelineReport:
    shape: ExtensionShape
    d_A: int
    m_cohomology: int
    kernel_exponent: int
    r_closure_contains: bool
    steps: list[PrimeStep]
    algebra_n: FactoredInteger
    index: FactoredInteger
    bound: FactoredInteger
    descent_holds: bool
    divides: bool
    components: list[PipelineReport] = field(default_factory=list)
    crt_consistent: bool = True

    @property
    def algebra_exponents(self) -> dict[int, int]:
        return {st.prime: st.algebra_exponent for st in self.steps}

    def to_json(self) -> dict:
        return {
            "shape": {"r": self.shape.r, "s": self.shape.s, "N": self.shape.N},
            "d_A": self.d_A,
            "m_cohomology": self.m_cohomology,
            "kernel_exponent": self.kernel_exponent,
            "r_closure_contains_dA_m_M": self.r_closure_contains,
            "steps": [st.to_json() for st in self.steps],
            "algebra_n": self.algebra_n.to_json(),
            "index": self.index.to_json(),
            "bound": self.bound.to_json(),
            "descent_holds": self.descent_holds,
            "divides": self.divides,
            "crt_consistent": self.crt_consistent,
            "components": [c.to_json() for c in self.components],
        }


def entanglement_pipeline(
    V: Submodule,
    action_gens: Sequence,
    d_A: int,
    m_cohomology: int,
    crt_check: bool = True,
) -> PipelineReport:
    """Kernel exponent, R-closure bound, then per-prime algebra descent.

    Reports whether ``[M : V]`` divides ``(d_A * n * m)^{rs}`` where ``n`` is
    assembled from the per-prime algebra exponents of the action.
    """
    shape = V.shape
    if d_A < 1 or m_cohomology < 1:
        raise PreconditionFailed("d_A >= 1 and m >= 1")
    action = [_as_matrix(h, shape.N, shape.s, shape.s) for h in action_gens]
    if not V.is_stable_under(action):
        raise PreconditionFailed("V is closed under the action generators")
    dm = d_A * m_cohomology
    e = kernel_exponent(joint_kernel(V))
    if dm % e:
        raise PreconditionFailed("exponent of the joint kernel divides d_A * m", f"exponent {e}, d_A*m = {dm}")
    w_ok = contains_scaled_full(r_module_closure(V), dm)

    steps = []
    algebra_n = FactoredInteger.one()
    for ell, k in crt_split(shape.N).factors:
        q = ell**k
        local_action = [h.reduce(q) for h in action]
        alg = algebra_closure(local_action, ell, k, shape.s)
        if alg.exponent is None:
            raise PrecisionInsufficient(ell, k)
        local = V.reduce(q)
        a = valuation(dm, ell) + alg.exponent
        steps.append(PrimeStep(ell, k, alg.exponent, a, contains_scaled_full(local, ell**a), index(local)))
        algebra_n = algebra_n * FactoredInteger.prime_power(ell, alg.exponent)

    idx = index(V)
    bound = bound_general(d_A, algebra_n, FactoredInteger.from_int(m_cohomology), shape.r, shape.s)
    report = PipelineReport(
        shape=shape,
        d_A=d_A,
        m_cohomology=m_cohomology,
        kernel_exponent=e,
        r_closure_contains=w_ok,
        steps=steps,
        algebra_n=algebra_n,
        index=idx,
        bound=bound,
        descent_holds=all(st.descent_holds for st in steps),
        divides=idx.divides(bound),
    )
    if crt_check and len(steps) > 1:
        comps = [
            entanglement_pipeline(V.reduce(st.prime**st.precision), [h.reduce(st.prime**st.precision) for h in action], d_A, m_cohomology, crt_check=False)
            for st in steps
        ]
        report.components = comps
        report.crt_consistent = (
            report.divides == all(c.divides for c in comps)
            and idx == FactoredInteger.product(c.index for c in comps)
            and all(c.algebra_exponents == {st.prime: st.algebra_exponent} for c, st in zip(comps, steps))
            and V.order() == math.prod(c_order for c_order in (c_v.order() for c_v in (V.reduce(st.prime**st.precision) for st in steps)))
        )
    return report
