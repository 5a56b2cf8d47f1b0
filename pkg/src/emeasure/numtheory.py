"""Primes, p-adic valuations and Legendre's formula."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Tuple

from flint import arb

from .balls import certainly_le, log_int


@dataclass(frozen=True)
class PrimeList:
    limit: int
    primes: Tuple[int, ...]

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)

    def __getitem__(self, i):
        return self.primes[i]


@lru_cache(maxsize=64)
def primes_upto(limit: int) -> PrimeList:
    """Sieve of Eratosthenes over odd numbers only.

    Index ``i`` of the sieve stands for ``2*i + 1``.
    """
    if limit < 0:
        raise ValueError("limit must be non-negative")
    if limit < 2:
        return PrimeList(limit, ())
    size = (limit - 1) // 2 + 1
    sieve = bytearray(b"\x01") * size
    sieve[0] = 0
    i = 1
    while (2 * i + 1) ** 2 <= limit:
        if sieve[i]:
            p = 2 * i + 1
            start = p * p // 2
            sieve[start::p] = bytes(len(range(start, size, p)))
        i += 1
    return PrimeList(limit, (2,) + tuple(2 * k + 1 for k in range(size) if sieve[k]))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def vp(n: int, p: int) -> int:
    """Exponent of ``p`` in the non-zero integer ``n``."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    k = 0
    # peel off p^(2^i) blocks first so huge coefficients with large
    # valuations do not cost one division per unit of valuation
    pows = [p]
    while n % pows[-1] == 0:
        n //= pows[-1]
        k += 1 << (len(pows) - 1)
        pows.append(pows[-1] * pows[-1])
    for i in range(len(pows) - 2, -1, -1):
        if n % pows[i] == 0:
            n //= pows[i]
            k += 1 << i
    return k


def vp_factorial(n: int, p: int) -> int:
    """Legendre: v_p(n!) = sum_i floor(n / p^i)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    total = 0
    q = n // p
    while q:
        total += q
        q //= p
    return total


@dataclass(frozen=True)
class ValuationBounds:
    """Two-sided bound on v_p(n!).

    ``lower`` is a ball around n/(p-1) - log n/log p - 1; use
    ``lower.lower()`` when a certified underestimate is needed.  ``upper``
    is the exact rational (n-1)/(p-1).
    """

    n: int
    p: int
    lower: arb
    upper: Fraction

    def contains(self, value: int) -> bool:
        """Certified check that lower <= value <= upper."""
        return certainly_le(self.lower, arb(value)) and value <= self.upper


def vp_factorial_bounds(n: int, p: int) -> ValuationBounds:
    if n < 2:
        raise ValueError("bounds need n >= 2")
    lower = arb(n) / (p - 1) - log_int(n) / log_int(p) - 1
    return ValuationBounds(n, p, lower, Fraction(n - 1, p - 1))


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius needs n >= 1")
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result
