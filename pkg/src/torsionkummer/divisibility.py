"""Divisibility parameter of a finitely generated subgroup of a free lattice.

Columns of the generator matrix are coordinates of generators of A in a
Z-basis of the Mordell-Weil lattice modulo torsion. With ``P M Q = D`` the
Smith form, the columns ``f_i`` of ``P^-1`` form an adapted basis and
``d_1 f_1, …, d_r f_r`` is a basis of A.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from sympy import Matrix

from .errors import DimensionMismatch, RankZero
from .zmod import SnfResult, ZMatrix, snf


@dataclass(frozen=True)
class GeneratorMatrix:
    """A ``rho x t`` integer matrix whose columns generate A."""

    gens: ZMatrix

    def __post_init__(self):
        if self.gens.modulus is not None:
            raise ValueError("generator matrix must be over Z")
        if self.gens.rows < 1 or self.gens.cols < 1:
            raise DimensionMismatch("generator matrix needs at least one row and one column")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> GeneratorMatrix:
        return cls(ZMatrix.from_rows(rows))

    @property
    def mw_rank(self) -> int:
        return self.gens.rows

    @property
    def num_generators(self) -> int:
        return self.gens.cols

    def columns(self) -> list[tuple[int, ...]]:
        return [self.gens.column(j) for j in range(self.gens.cols)]


@dataclass(frozen=True)
class DivisibilityResult:
    d_A: int
    divisors: tuple[int, ...]
    adapted_basis: ZMatrix
    smith: SnfResult

    @property
    def rank(self) -> int:
        return len(self.divisors)

    def adapted_vector(self, i: int) -> tuple[int, ...]:
        return self.adapted_basis.column(i)


def unimodular_inverse(m: ZMatrix) -> ZMatrix:
    inv = Matrix(m.tolist()).inv()
    if any(x.q != 1 for x in inv):
        raise ValueError("matrix is not unimodular")
    return ZMatrix.from_rows([[int(x) for x in inv.row(i)] for i in range(m.rows)], cols=m.cols)


def divisibility_parameter(g: GeneratorMatrix) -> DivisibilityResult:
    """``d_A`` is the largest invariant factor ``d_r``."""
    res = snf(g.gens)
    if res.rank == 0:
        raise RankZero("generator matrix is zero; A must have positive rank")
    d = res.divisors
    for a, b in zip(d, d[1:]):
        assert b % a == 0, f"invariant factors {d} do not form a divisor chain"
    return DivisibilityResult(d[-1], d, unimodular_inverse(res.P), res)


def saturation_membership(g: GeneratorMatrix, v: Sequence[int], smith: SnfResult | None = None) -> tuple[bool, bool]:
    """``(v in A, some positive multiple of v in A)``."""
    if len(v) != g.mw_rank:
        raise DimensionMismatch(f"vector has length {len(v)}, expected {g.mw_rank}")
    res = smith if smith is not None else snf(g.gens)
    pv = res.P @ ZMatrix.from_rows([[x] for x in v], cols=1)
    coords = [pv[i, 0] for i in range(pv.rows)]
    r = res.rank
    in_sat = all(c == 0 for c in coords[r:])
    in_a = in_sat and all(c % d == 0 for c, d in zip(coords, res.divisors))
    return in_a, in_sat
