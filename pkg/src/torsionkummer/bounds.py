"""Explicit entanglement bounds for elliptic curves and the finite-level general bound.

Every quantity is a :class:`FactoredInteger`. Reports keep all intermediates
so the final bound can be re-derived and compared exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from sympy import isprime

from .errors import CMOverBaseField, CMRecord, MissingCartanParams, MissingGrowthParam, NonCMRecord
from .factored import FactoredInteger, prime_divisors, valuation

TORSION_DIM = 2


def _factored(x: int | FactoredInteger) -> FactoredInteger:
    return x if isinstance(x, FactoredInteger) else FactoredInteger.from_int(x)


def bad_primes_noncm(rec) -> frozenset[int]:
    if rec.is_cm:
        raise CMRecord(f"record {rec.label!r} has CM; use bad_primes_cm")
    return frozenset({2, 3, 5}) | set(rec.disc_primes) | set(rec.bad_reduction_primes) | set(rec.nonsurjective_primes or ())


def bad_primes_cm(rec) -> frozenset[int]:
    if not rec.is_cm:
        raise NonCMRecord(f"record {rec.label!r} has no CM block; use bad_primes_noncm")
    cm = rec.cm
    return frozenset(prime_divisors(cm.order_conductor)) | set(cm.ramified_primes) | set(rec.bad_reduction_primes)


def m_ell(bad: Iterable[int], ell: int) -> int:
    """``sum over p in bad of v_l((p^2 - 1)(p^2 - p))``."""
    if not isprime(ell):
        raise ValueError(f"{ell} is not prime")
    return sum(valuation((p * p - 1) * (p * p - p), ell) for p in bad)


def adelic_bound_mE(
    bad: Iterable[int], growth: Mapping[int, int], m: Mapping[int, int] | None = None
) -> FactoredInteger:
    """``prod l^(n_l + m_l)`` over ``l`` in ``bad``; ``m_l`` defaults to :func:`m_ell`."""
    bad = sorted(set(bad))
    exps = {}
    for ell in bad:
        if ell not in growth:
            raise MissingGrowthParam(ell)
        exps[ell] = growth[ell] + (m[ell] if m is not None and ell in m else m_ell(bad, ell))
    return FactoredInteger.from_exponents(exps)


def cohomology_exponent(field_degree: int) -> int:
    return 12 * field_degree


def cohomology_bound_mK(field_degree: int) -> FactoredInteger:
    """``4^e * prod l^e`` over odd primes with ``(l - 1) | e``, where ``e = 12 [K:Q]``."""
    if field_degree < 1:
        raise ValueError("field degree must be at least 1")
    e = cohomology_exponent(field_degree)
    exps = {2: 2 * e}
    for ell in range(3, e + 2):
        if e % (ell - 1) == 0 and isprime(ell):
            exps[ell] = e
    return FactoredInteger.from_exponents(exps)


def bound_general(
    d_A: int | FactoredInteger, n: int | FactoredInteger, m: int | FactoredInteger, r: int, s: int
) -> FactoredInteger:
    """``(d_A n m)^(r s)``."""
    if r < 1 or s < 0:
        raise ValueError(f"need r >= 1 and s >= 0, got r={r}, s={s}")
    return (_factored(d_A) * _factored(n) * _factored(m)) ** (r * s)


@dataclass
class BoundReport:
    """Intermediates of a per-curve bound.

    ``per_prime_exponents[l] = (n_l, e_l)`` where ``e_l`` is ``m_l`` for the
    non-CM bound and ``v_l(4 delta_l)`` for the CM bound.
    """

    kind: str  # "noncm" or "cm"
    label: str
    d_A: int
    divisors: tuple[int, ...]
    rank: int
    torsion_dim: int
    bad_primes: tuple[int, ...]
    per_prime_exponents: dict[int, tuple[int, int]]
    adelic_constant: FactoredInteger
    final_bound: FactoredInteger
    m_K: FactoredInteger | None = None
    ratio_table: list[RatioRow] = field(default_factory=list)

    def recompute(self) -> tuple[FactoredInteger, FactoredInteger]:
        """Re-derive ``(adelic_constant, final_bound)`` from the stored parts."""
        if self.kind == "noncm":
            adelic = FactoredInteger.from_exponents({p: n + e for p, (n, e) in self.per_prime_exponents.items()})
            n_part = FactoredInteger.from_exponents({p: n for p, (n, _) in self.per_prime_exponents.items()})
            final = bound_general(self.d_A, n_part, adelic, self.rank, self.torsion_dim)
        elif self.kind == "cm":
            if self.m_K is None:
                raise ValueError("CM report without m_K")
            adelic = self.m_K * FactoredInteger.from_exponents({p: n + e for p, (n, e) in self.per_prime_exponents.items()})
            final = bound_general(self.d_A, 1, adelic, self.rank, self.torsion_dim)
        else:
            raise ValueError(f"unknown report kind {self.kind!r}")
        return adelic, final

    def mismatches(self) -> list[str]:
        adelic, final = self.recompute()
        out = []
        if self.d_A != (self.divisors[-1] if self.divisors else None):
            out.append(f"d_A = {self.d_A} is not the largest invariant factor of {self.divisors}")
        if adelic != self.adelic_constant:
            out.append(f"adelic_constant: stored {self.adelic_constant}, recomputed {adelic}")
        if final != self.final_bound:
            out.append(f"final_bound: stored {self.final_bound}, recomputed {final}")
        return out


def _divisibility(rec):
    from .divisibility import divisibility_parameter

    return divisibility_parameter(rec.generator_matrix())


def bound_noncm(rec) -> BoundReport:
    """``(d_A prod l^(2 n_l + m_l))^(2r)`` over the bad primes of a non-CM curve."""
    bad = sorted(bad_primes_noncm(rec))
    div = _divisibility(rec)
    per = {}
    for ell in bad:
        if ell not in rec.growth_params:
            raise MissingGrowthParam(ell)
        per[ell] = (rec.growth_params[ell], m_ell(bad, ell))
    adelic = adelic_bound_mE(bad, rec.growth_params)
    inner = FactoredInteger.from_int(div.d_A) * FactoredInteger.from_exponents({p: 2 * n + m for p, (n, m) in per.items()})
    return BoundReport(
        kind="noncm",
        label=rec.label,
        d_A=div.d_A,
        divisors=div.divisors,
        rank=div.rank,
        torsion_dim=TORSION_DIM,
        bad_primes=tuple(bad),
        per_prime_exponents=per,
        adelic_constant=adelic,
        final_bound=inner ** (2 * div.rank),
    )


def cartan_exponent(ell: int, delta: int) -> int:
    """``v_l(4 delta)`` with ``v_l(0) = 0``."""
    return 0 if delta == 0 else valuation(4 * delta, ell)


def bound_cm(rec) -> BoundReport:
    """``(d_A m_K prod l^(n_l + v_l(4 delta_l)))^(2r)`` for CM not defined over K."""
    if not rec.is_cm:
        raise NonCMRecord(f"record {rec.label!r} has no CM block; use bound_noncm")
    if rec.cm.cm_field_in_K:
        raise CMOverBaseField(
            f"record {rec.label!r}: the CM field lies in K, so End_K(E) is larger than Z and the "
            "entanglement group can be infinite; no finite bound applies"
        )
    bad = sorted(bad_primes_cm(rec))
    div = _divisibility(rec)
    per = {}
    for ell in bad:
        if ell not in rec.growth_params:
            raise MissingGrowthParam(ell)
        if ell not in rec.cm.cartan_params:
            raise MissingCartanParams(ell)
        _, delta = rec.cm.cartan_params[ell]
        per[ell] = (rec.growth_params[ell], cartan_exponent(ell, delta))
    m_K = cohomology_bound_mK(rec.field_degree)
    adelic = m_K * FactoredInteger.from_exponents({p: n + w for p, (n, w) in per.items()})
    return BoundReport(
        kind="cm",
        label=rec.label,
        d_A=div.d_A,
        divisors=div.divisors,
        rank=div.rank,
        torsion_dim=TORSION_DIM,
        bad_primes=tuple(bad),
        per_prime_exponents=per,
        adelic_constant=adelic,
        final_bound=(FactoredInteger.from_int(div.d_A) * adelic) ** (2 * div.rank),
        m_K=m_K,
    )


def bound_for(rec) -> BoundReport:
    return bound_cm(rec) if rec.is_cm else bound_noncm(rec)


@dataclass(frozen=True)
class RatioRow:
    """At level ``n``: the defect ``n^(rs) / degree`` divides ``ratio_divisor``."""

    n: int
    full_degree: FactoredInteger  # n^(rs), the degree without entanglement
    ratio_divisor: FactoredInteger  # gcd(n^(rs), bound)
    degree_multiple_of: FactoredInteger  # n^(rs) / ratio_divisor

    @property
    def trivial(self) -> bool:
        return self.ratio_divisor.is_one()


def ratio_divisor_table(bound: FactoredInteger, r: int, s: int, levels: Sequence[int]) -> list[RatioRow]:
    if not levels:
        raise ValueError("levels must be nonempty")
    rows = []
    for n in levels:
        if n < 1:
            raise ValueError(f"level must be positive, got {n}")
        full = FactoredInteger.from_int(n) ** (r * s)
        g = full.gcd(bound)
        rows.append(RatioRow(n, full, g, full.exact_div(g)))
    return rows
