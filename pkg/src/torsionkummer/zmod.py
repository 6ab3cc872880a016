"""Exact linear algebra over Z and Z/NZ.

Matrices are immutable tuples of Python ints, so nothing ever wraps around.
Subgroups of (Z/N)^k are kept in a canonical Hermite form (see
:class:`Subgroup`), which makes equality, membership and index cheap.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from sympy import factorint
from sympy.ntheory.modular import crt

from .errors import DimensionMismatch, NotInvertible, OracleSizeLimit
from .factored import FactoredInteger

MINORS_ORACLE_MAX_DIM = 5

Rows = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ZMatrix:
    """A ``rows x cols`` integer matrix, optionally reduced modulo ``modulus``.

    Zero-dimensional matrices are legal and model the trivial module.
    """

    rows: int
    cols: int
    entries: Rows
    modulus: int | None = None

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("negative dimension")
        if self.modulus is not None and self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatch(f"entries do not form a {self.rows}x{self.cols} array")
        entries = tuple(tuple(int(x) for x in r) for r in self.entries)
        if self.modulus is not None:
            n = self.modulus
            entries = tuple(tuple(x % n for x in r) for r in entries)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, data: Sequence[Sequence[int]], modulus: int | None = None, cols: int | None = None) -> ZMatrix:
        data = [list(r) for r in data]
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, tuple(tuple(r) for r in data), modulus)

    @classmethod
    def zeros(cls, rows: int, cols: int, modulus: int | None = None) -> ZMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)), modulus)

    @classmethod
    def identity(cls, n: int, modulus: int | None = None) -> ZMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), modulus)

    @classmethod
    def from_flat(cls, flat: Sequence[int], rows: int, cols: int, modulus: int | None = None) -> ZMatrix:
        if len(flat) != rows * cols:
            raise DimensionMismatch(f"{len(flat)} entries cannot fill {rows}x{cols}")
        return cls(rows, cols, tuple(tuple(flat[i * cols:(i + 1) * cols]) for i in range(rows)), modulus)

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int, cols: int, modulus: int | None = None) -> ZMatrix:
        data = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(diag):
            data[i][i] = d
        return cls.from_rows(data, modulus, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def flat(self) -> tuple[int, ...]:
        return tuple(x for r in self.entries for x in r)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> ZMatrix:
        return ZMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)), self.modulus)

    def reduce(self, modulus: int) -> ZMatrix:
        """Reduce modulo ``modulus``; if already modular it must divide the old modulus."""
        if self.modulus is not None and self.modulus % modulus:
            raise ValueError(f"{modulus} does not divide {self.modulus}")
        return ZMatrix(self.rows, self.cols, self.entries, modulus)

    def lift(self) -> ZMatrix:
        return ZMatrix(self.rows, self.cols, self.entries, None)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def scale(self, c: int) -> ZMatrix:
        return ZMatrix(self.rows, self.cols, tuple(tuple(c * x for x in r) for r in self.entries), self.modulus)

    def __neg__(self) -> ZMatrix:
        return self.scale(-1)

    def __add__(self, other: ZMatrix) -> ZMatrix:
        return matadd(self, other)

    def __sub__(self, other: ZMatrix) -> ZMatrix:
        return matadd(self, -other)

    def __matmul__(self, other: ZMatrix) -> ZMatrix:
        return matmul(self, other)

    def __str__(self) -> str:
        body = "\n".join(" ".join(f"{x:>4d}" for x in r) for r in self.entries)
        suffix = f"  (mod {self.modulus})" if self.modulus is not None else ""
        return body + suffix


def _trusted(rows: int, cols: int, entries: Rows, modulus: int | None) -> ZMatrix:
    # entries must already be int tuples of the right shape, reduced if modular
    m = object.__new__(ZMatrix)
    object.__setattr__(m, "rows", rows)
    object.__setattr__(m, "cols", cols)
    object.__setattr__(m, "entries", entries)
    object.__setattr__(m, "modulus", modulus)
    return m


def _check_modulus(a: ZMatrix, b: ZMatrix) -> int | None:
    if a.modulus != b.modulus:
        raise DimensionMismatch(f"moduli differ: {a.modulus} vs {b.modulus}")
    return a.modulus


def matmul(a: ZMatrix, b: ZMatrix) -> ZMatrix:
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    n = _check_modulus(a, b)
    bt = list(zip(*b.entries)) if b.rows else [()] * b.cols
    if n is None:
        data = tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a.entries)
    else:
        data = tuple(tuple(sum(x * y for x, y in zip(row, col)) % n for col in bt) for row in a.entries)
    return _trusted(a.rows, b.cols, data, n)


def matadd(a: ZMatrix, b: ZMatrix) -> ZMatrix:
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot add {a.shape} and {b.shape}")
    n = _check_modulus(a, b)
    if n is None:
        data = tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a.entries, b.entries))
    else:
        data = tuple(tuple((x + y) % n for x, y in zip(r, s)) for r, s in zip(a.entries, b.entries))
    return _trusted(a.rows, a.cols, data, n)


def det(m: ZMatrix) -> int:
    """Determinant by fraction-free Bareiss elimination (reduced if modular)."""
    if m.rows != m.cols:
        raise DimensionMismatch("determinant of a non-square matrix")
    n = m.rows
    a = [list(r) for r in m.entries]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    d = sign * a[n - 1][n - 1] if n else 1
    return d % m.modulus if m.modulus is not None else d


def is_unimodular(m: ZMatrix) -> bool:
    """Square with unit determinant (``±1`` over Z, coprime to N mod N)."""
    if m.rows != m.cols:
        return False
    d = det(m)
    if m.modulus is None:
        return abs(d) == 1
    return math.gcd(d, m.modulus) == 1


# ---------------------------------------------------------------- Smith form


@dataclass(frozen=True)
class SnfResult:
    """``P @ M @ Q`` is diagonal with ``divisors`` leading its diagonal.

    ``divisors`` holds only the non-zero invariant factors, so its length
    is the rank of ``M``.
    """

    P: ZMatrix
    Q: ZMatrix
    divisors: tuple[int, ...]
    source_shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return len(self.divisors)

    @property
    def D(self) -> ZMatrix:
        return ZMatrix.diagonal(self.divisors, *self.source_shape)


def snf(m: ZMatrix) -> SnfResult:
    """Smith normal form over Z with smallest-absolute-value pivoting."""
    if m.modulus is not None:
        raise ValueError("snf works over Z; call .lift() first")
    nr, nc = m.rows, m.cols
    a = [list(r) for r in m.entries]
    p = [[int(i == j) for j in range(nr)] for i in range(nr)]
    q = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        p[i], p[j] = p[j], p[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in q:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        if c:
            ra, rs = a[dst], a[src]
            for k in range(nc):
                ra[k] += c * rs[k]
            pa, ps = p[dst], p[src]
            for k in range(nr):
                pa[k] += c * ps[k]

    def add_col(dst, src, c):
        if c:
            for row in a:
                row[dst] += c * row[src]
            for row in q:
                row[dst] += c * row[src]

    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            for i in range(t + 1, nr):
                add_row(i, t, -(a[i][t] // a[t][t]))
            for j in range(t + 1, nc):
                add_col(j, t, -(a[t][j] // a[t][t]))
            rest = [(abs(a[i][t]), i, "r") for i in range(t + 1, nr) if a[i][t]]
            rest += [(abs(a[t][j]), j, "c") for j in range(t + 1, nc) if a[t][j]]
            if rest:
                _, k, kind = min(rest)
                if kind == "r":
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            piv = a[t][t]
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            p[t] = [-x for x in p[t]]
        t += 1

    return SnfResult(
        P=ZMatrix.from_rows(p, cols=nr),
        Q=ZMatrix.from_rows(q, cols=nc),
        divisors=tuple(a[i][i] for i in range(t)),
        source_shape=(nr, nc),
    )


def _leibniz_det(rows: Sequence[Sequence[int]]) -> int:
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i, j in enumerate(perm):
            term *= rows[i][j]
            if not term:
                break
        total += term
    return total


def elementary_divisors_via_minors(m: ZMatrix, max_dim: int = MINORS_ORACLE_MAX_DIM) -> tuple[int, ...]:
    """Invariant factors as ratios of gcds of i x i minors.

    Independent of :func:`snf`: minors are evaluated by the permutation
    expansion. Stops at the first size whose minors all vanish.
    """
    if m.modulus is not None:
        raise ValueError("minors oracle works over Z")
    if max(m.rows, m.cols) > max_dim:
        raise OracleSizeLimit(f"minors oracle limited to dimension {max_dim}, got {m.shape}")
    out = []
    prev = 1
    for size in range(1, min(m.rows, m.cols) + 1):
        g = 0
        for rs in itertools.combinations(range(m.rows), size):
            for cs in itertools.combinations(range(m.cols), size):
                g = math.gcd(g, _leibniz_det([[m.entries[i][j] for j in cs] for i in rs]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return tuple(out)


def inverse_mod(m: ZMatrix, modulus: int | None = None) -> ZMatrix:
    """Inverse modulo N, computed as ``Q D^-1 P`` from the Smith form of the lift."""
    n = modulus if modulus is not None else m.modulus
    if n is None:
        raise ValueError("inverse_mod needs a modulus")
    if m.rows != m.cols:
        raise DimensionMismatch("only square matrices are invertible")
    if n == 1:
        return ZMatrix.zeros(m.rows, m.cols, 1)
    res = snf(m.lift())
    if res.rank < m.rows or any(math.gcd(d, n) != 1 for d in res.divisors):
        raise NotInvertible(f"determinant is not a unit modulo {n}")
    dinv = ZMatrix.diagonal([pow(d, -1, n) for d in res.divisors], m.rows, m.rows)
    return (res.Q @ dinv @ res.P).reduce(n)


# ----------------------------------------------------------------- subgroups


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of ``(Z/N)^dim`` in canonical Hermite form.

    ``hnf`` is the upper-triangular basis of the lattice ``L`` with
    ``N Z^dim ⊆ L ⊆ Z^dim`` and ``L / N Z^dim`` the subgroup: the diagonal
    entries divide N and each entry right of a pivot lies in ``[0, pivot)``
    of its column. Two subgroups are equal iff their ``hnf`` tuples are.
    """

    modulus: int
    dim: int
    hnf: Rows

    @classmethod
    def zero(cls, modulus: int, dim: int) -> Subgroup:
        return cls(modulus, dim, tuple(tuple(modulus if i == j else 0 for j in range(dim)) for i in range(dim)))

    @classmethod
    def full(cls, modulus: int, dim: int) -> Subgroup:
        return cls(modulus, dim, tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)))

    @classmethod
    def generated_by(cls, vectors: Iterable[Sequence[int]], modulus: int, dim: int) -> Subgroup:
        h = [list(r) for r in cls.zero(modulus, dim).hnf]
        for v in vectors:
            if len(v) != dim:
                raise DimensionMismatch(f"vector of length {len(v)} in (Z/{modulus})^{dim}")
            _insert(h, v, modulus)
        return cls(modulus, dim, _normalize(h))

    def with_vectors(self, vectors: Iterable[Sequence[int]]) -> Subgroup:
        h = [list(r) for r in self.hnf]
        for v in vectors:
            _insert(h, v, self.modulus)
        return Subgroup(self.modulus, self.dim, _normalize(h))

    def contains(self, v: Sequence[int]) -> bool:
        if len(v) != self.dim:
            raise DimensionMismatch(f"vector of length {len(v)} in (Z/{self.modulus})^{self.dim}")
        n = self.modulus
        w = [x % n for x in v]
        for i, row in enumerate(self.hnf):
            if w[i] % row[i]:
                return False
            c = w[i] // row[i]
            if c:
                for j in range(i, self.dim):
                    w[j] = (w[j] - c * row[j]) % n
        return True

    def contains_subgroup(self, other: Subgroup) -> bool:
        return all(self.contains(g) for g in other.generators())

    def generators(self) -> list[tuple[int, ...]]:
        n = self.modulus
        gens = [tuple(x % n for x in row) for row in self.hnf]
        return [g for g in gens if any(g)]

    def index(self) -> int:
        return math.prod(self.hnf[i][i] for i in range(self.dim))

    def factored_index(self) -> FactoredInteger:
        return FactoredInteger.product(FactoredInteger.from_int(self.hnf[i][i]) for i in range(self.dim))

    def order(self) -> int:
        return self.modulus**self.dim // self.index()

    def exponent(self) -> int:
        """Least ``e`` with ``e * x = 0`` for every element ``x``."""
        n = self.modulus
        e = 1
        for g in self.generators():
            e = math.lcm(e, n // math.gcd(n, *g))
        return e

    def reduce(self, modulus: int) -> Subgroup:
        """Image under the projection ``(Z/N)^dim -> (Z/n)^dim`` for ``n | N``."""
        if self.modulus % modulus:
            raise ValueError(f"{modulus} does not divide {self.modulus}")
        return Subgroup.generated_by(self.generators(), modulus, self.dim)

    def elements(self) -> Iterable[tuple[int, ...]]:
        """Enumerate every element (small groups only)."""
        n = self.modulus
        ranges = [range(n // self.hnf[i][i]) for i in range(self.dim)]
        for coeffs in itertools.product(*ranges):
            v = [0] * self.dim
            for c, row in zip(coeffs, self.hnf):
                if c:
                    for j in range(self.dim):
                        v[j] += c * row[j]
            yield tuple(x % n for x in v)


def _reduce_row_below(h: list[list[int]], row: list[int], start: int) -> None:
    for j in range(start, len(row)):
        c = row[j] // h[j][j]
        if c:
            hj = h[j]
            for k in range(j, len(row)):
                row[k] -= c * hj[k]


def _insert(h: list[list[int]], v: Sequence[int], n: int) -> None:
    """Add ``v`` to the lattice spanned by the triangular basis ``h`` in place."""
    k = len(h)
    v = [x % n for x in v]
    for i in range(k):
        b = v[i]
        if b == 0:
            continue
        row = h[i]
        a = row[i]
        if b % a == 0:
            c = b // a
            for j in range(i, k):
                v[j] -= c * row[j]
        else:
            g, x, y = _ext_gcd(a, b)
            ag, bg = a // g, b // g
            new_row = [x * row[j] + y * v[j] for j in range(k)]
            v = [ag * v[j] - bg * row[j] for j in range(k)]
            h[i] = new_row
            _reduce_row_below(h, new_row, i + 1)
        v = [x % n for x in v]


def _normalize(h: list[list[int]]) -> Rows:
    for i in range(len(h)):
        _reduce_row_below(h, h[i], i + 1)
    return tuple(tuple(r) for r in h)


def kernel_mod(m: ZMatrix) -> Subgroup:
    """Kernel of ``x -> M x`` on ``(Z/N)^cols``, read off the Smith form of the lift."""
    n = m.modulus
    if n is None:
        raise ValueError("kernel_mod needs a modular matrix")
    res = snf(m.lift())
    q = res.Q
    gens = []
    for i in range(m.cols):
        col = q.column(i)
        if i < res.rank:
            step = n // math.gcd(res.divisors[i], n)
            col = tuple(step * x for x in col)
        gens.append(col)
    return Subgroup.generated_by(gens, n, m.cols)


def image_mod(m: ZMatrix) -> Subgroup:
    """Column span of a modular matrix as a subgroup of ``(Z/N)^rows``."""
    if m.modulus is None:
        raise ValueError("image_mod needs a modular matrix")
    return Subgroup.generated_by([m.column(j) for j in range(m.cols)], m.modulus, m.rows)


# ----------------------------------------------------------------------- CRT


@dataclass(frozen=True)
class CrtSplit:
    """Decomposition ``Z/N = prod Z/l^e`` with explicit reduce and lift maps."""

    modulus: int
    factors: tuple[tuple[int, int], ...]

    @property
    def moduli(self) -> list[int]:
        return [p**e for p, e in self.factors]

    def reduce(self, x: int) -> tuple[int, ...]:
        return tuple(x % q for q in self.moduli)

    def lift(self, residues: Sequence[int]) -> int:
        if len(residues) != len(self.factors):
            raise DimensionMismatch("one residue per prime-power factor expected")
        if not self.factors:
            return 0
        x, _ = crt(self.moduli, list(residues), check=False)
        return int(x) % self.modulus


def crt_split(n: int) -> CrtSplit:
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    return CrtSplit(n, tuple(sorted((int(p), int(e)) for p, e in factorint(n).items())))
