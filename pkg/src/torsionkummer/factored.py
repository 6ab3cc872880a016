"""Positive integers stored as prime-exponent maps.

Final bounds easily run to thousands of digits, so the arithmetic here
never expands a product unless :meth:`FactoredInteger.to_int` is called.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from sympy import factorint, isprime, multiplicity

DEFAULT_DIGIT_CAP = 10_000


def valuation(n: int, p: int) -> int:
    """Exponent of the prime ``p`` in ``n``. Raises on ``n == 0``."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    return int(multiplicity(p, abs(n)))


def prime_divisors(n: int) -> list[int]:
    """Sorted primes dividing ``n`` (``n != 0``); empty for ``n = ±1``."""
    if n == 0:
        raise ValueError("0 has infinitely many prime divisors")
    return sorted(int(p) for p in factorint(abs(n)))


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer as a sorted tuple of ``(prime, exponent)`` pairs."""

    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        last = 0
        for p, e in self.factors:
            if p <= last:
                raise ValueError("factors must be sorted by strictly increasing prime")
            if e < 1:
                raise ValueError(f"exponent of {p} must be positive, got {e}")
            last = p

    @classmethod
    def one(cls) -> FactoredInteger:
        return cls(())

    @classmethod
    def from_exponents(cls, exponents: Mapping[int, int], check_primes: bool = True) -> FactoredInteger:
        items = []
        for p, e in exponents.items():
            p, e = int(p), int(e)
            if e < 0:
                raise ValueError(f"negative exponent {e} for {p}")
            if e == 0:
                continue
            if check_primes and not isprime(p):
                raise ValueError(f"{p} is not prime")
            items.append((p, e))
        return cls(tuple(sorted(items)))

    @classmethod
    def from_int(cls, n: int) -> FactoredInteger:
        if n < 1:
            raise ValueError(f"FactoredInteger needs a positive integer, got {n}")
        return cls.from_exponents({int(p): int(e) for p, e in factorint(n).items()}, check_primes=False)

    @classmethod
    def prime_power(cls, p: int, e: int) -> FactoredInteger:
        return cls.from_exponents({p: e})

    @classmethod
    def product(cls, items: Iterable[FactoredInteger]) -> FactoredInteger:
        out = cls.one()
        for x in items:
            out = out * x
        return out

    @property
    def exponents(self) -> dict[int, int]:
        return dict(self.factors)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def valuation(self, p: int) -> int:
        return self.exponents.get(p, 0)

    def is_one(self) -> bool:
        return not self.factors

    def __mul__(self, other: FactoredInteger | int) -> FactoredInteger:
        if isinstance(other, int):
            other = FactoredInteger.from_int(other)
        exps = self.exponents
        for p, e in other.factors:
            exps[p] = exps.get(p, 0) + e
        return FactoredInteger.from_exponents(exps, check_primes=False)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> FactoredInteger:
        if k < 0:
            raise ValueError("negative powers are not integers")
        if k == 0:
            return FactoredInteger.one()
        return FactoredInteger(tuple((p, e * k) for p, e in self.factors))

    def divides(self, other: FactoredInteger) -> bool:
        theirs = other.exponents
        return all(theirs.get(p, 0) >= e for p, e in self.factors)

    def gcd(self, other: FactoredInteger) -> FactoredInteger:
        theirs = other.exponents
        return FactoredInteger.from_exponents(
            {p: min(e, theirs.get(p, 0)) for p, e in self.factors}, check_primes=False
        )

    def exact_div(self, other: FactoredInteger) -> FactoredInteger:
        if not other.divides(self):
            raise ValueError(f"{other} does not divide {self}")
        exps = self.exponents
        for p, e in other.factors:
            exps[p] -= e
        return FactoredInteger.from_exponents(exps, check_primes=False)

    def digit_estimate(self) -> int:
        """Upper bound on the number of decimal digits."""
        return int(sum(e * math.log10(p) for p, e in self.factors)) + 1

    def to_int(self, max_digits: int | None = DEFAULT_DIGIT_CAP) -> int:
        if max_digits is not None and self.digit_estimate() > max_digits:
            raise OverflowError(f"expansion would exceed {max_digits} digits")
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def to_json(self) -> dict[str, int]:
        return {str(p): e for p, e in self.factors}

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> FactoredInteger:
        return cls.from_exponents({int(p): int(e) for p, e in data.items()})

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)
