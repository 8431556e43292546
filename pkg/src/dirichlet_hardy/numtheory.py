"""Prime sieves, factorization, and smooth/rough integer enumeration.

Everything here is exact and desk-scale: sieves are meant for bounds up to
~10^8, per-integer factorizations for n up to ~10^12 (trial division) or
bulk work via a shared smallest-prime-factor table.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass


@dataclass(frozen=True)
class Factorization:
    """Prime factorization n = p1^a1 * ... * pk^ak, primes ascending.

    n == 1 is represented by an empty factor list.
    """

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        prev = 1
        for p, a in self.factors:
            if a < 1:
                raise ValueError("exponents must be >= 1")
            if p <= prev:
                raise ValueError("primes must be strictly increasing")
            prev = p
            prod *= p**a
        if prod != self.n:
            raise ValueError(f"factors do not multiply to {self.n}")


def primes_up_to(x: float) -> list[int]:
    """All primes p <= x, ascending (empty for x < 2)."""
    if x < 2:
        return []
    n = int(x)
    if n > x:  # guard against float rounding above the true bound
        n -= 1
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            start = p * p
            sieve[start :: p] = bytearray(len(range(start, n + 1, p)))
    return [i for i in range(2, n + 1) if sieve[i]]


def first_primes(count: int) -> list[int]:
    """The first `count` primes."""
    if count <= 0:
        return []
    # Rosser-style upper bound on the count-th prime, with a floor for tiny counts
    bound = 15
    if count >= 6:
        bound = int(count * (math.log(count) + math.log(math.log(count)))) + 10
    primes = primes_up_to(bound)
    while len(primes) < count:
        bound *= 2
        primes = primes_up_to(bound)
    return primes[:count]


def smallest_prime_factor_table(limit: int) -> list[int]:
    """Table spf[n] = smallest prime factor of n, for 0 <= n <= limit.

    Convention: spf[0] = 0, spf[1] = 1, spf[p] = p for primes.
    """
    spf = list(range(limit + 1))
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == p:
            for m in range(p * p, limit + 1, p):
                if spf[m] == m:
                    spf[m] = p
    return spf


_SPF_CACHE: list[int] = []


def build_spf_cache(limit: int) -> None:
    """Build (or extend) the shared smallest-prime-factor table.

    Callers doing bulk factorizations up to `limit` should invoke this once;
    `factorize` consults the table and falls back to trial division beyond it.
    """
    global _SPF_CACHE
    if limit + 1 > len(_SPF_CACHE):
        _SPF_CACHE = smallest_prime_factor_table(limit)


def factorize(n: int) -> Factorization:
    """Prime factorization of a positive integer."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    m = n
    factors = []
    if m < len(_SPF_CACHE):
        spf = _SPF_CACHE
        while m > 1:
            p = spf[m]
            a = 0
            while m % p == 0:
                m //= p
                a += 1
            factors.append((p, a))
    else:
        for p in (2, 3):
            if m % p == 0:
                a = 0
                while m % p == 0:
                    m //= p
                    a += 1
                factors.append((p, a))
        d = 5
        while d * d <= m:
            for p in (d, d + 2):
                if m % p == 0:
                    a = 0
                    while m % p == 0:
                        m //= p
                        a += 1
                    factors.append((p, a))
            d += 6
        if m > 1:
            factors.append((m, 1))
    return Factorization(n, tuple(factors))


def big_omega(n: int) -> int:
    """Number of prime factors of n counted with multiplicity."""
    return sum(a for _, a in factorize(n).factors)


def divisor_count(n: int) -> int:
    """Number of divisors d(n) = prod(a_i + 1)."""
    out = 1
    for _, a in factorize(n).factors:
        out *= a + 1
    return out


def max_divisor_count(x: float) -> int:
    """max{d(n) : n <= x}, by exact enumeration with a divisor-count sieve."""
    if x < 1:
        raise ValueError("max_divisor_count expects x >= 1")
    n = int(x)
    counts = [0] * (n + 1)
    for d in range(1, n + 1):
        for m in range(d, n + 1, d):
            counts[m] += 1
    return max(counts[1:])


def smooth_numbers(x: float, y: float) -> list[int]:
    """Integers n <= x whose prime factors are all <= y, ascending.

    1 is always included (its divisibility condition is vacuous).
    """
    if x < 1:
        raise ValueError("smooth_numbers expects x >= 1")
    primes = primes_up_to(min(y, x))
    out = []

    def extend(value: int, prime_idx: int) -> None:
        out.append(value)
        for i in range(prime_idx, len(primes)):
            nxt = value * primes[i]
            if nxt > x:
                break
            extend(nxt, i)

    extend(1, 0)
    out.sort()
    return out


def rough_numbers(x: float, y: float) -> list[int]:
    """Integers n <= x whose prime factors are all > y, ascending.

    1 is always included.
    """
    if x < 1:
        raise ValueError("rough_numbers expects x >= 1")
    n = int(x)
    keep = bytearray([1]) * (n + 1)
    for p in primes_up_to(min(y, n)):
        keep[p::p] = bytearray(len(range(p, n + 1, p)))
    return [1] + [m for m in range(2, n + 1) if keep[m]]


def smooth_rough_split(n: int, y: float) -> tuple[int, int]:
    """Split n = j*k with j built from primes <= y and k from primes > y."""
    j = 1
    k = 1
    for p, a in factorize(n).factors:
        if p <= y:
            j *= p**a
        else:
            k *= p**a
    return j, k


def dusart_pi_lower(t: float) -> float:
    """Prime-counting lower bound (t/log t)(1 + 1/log t), valid for t >= 599."""
    if t < 599:
        raise ValueError("dusart_pi_lower is only valid for t >= 599")
    lt = math.log(t)
    return (t / lt) * (1 + 1 / lt)


def prime_count(x: float) -> int:
    """pi(x) by sieve enumeration."""
    return len(primes_up_to(x))


def prime_index(p: int, primes: list[int]) -> int:
    """1-based index of prime p within an ascending prime list."""
    i = bisect_right(primes, p)
    if i == 0 or primes[i - 1] != p:
        raise ValueError(f"{p} is not in the prime list")
    return i
