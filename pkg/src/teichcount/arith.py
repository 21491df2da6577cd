"""Exact integer and rational number theory shared by the counting code.

Rationals are :class:`fractions.Fraction` values, which are always kept in
lowest terms with a positive denominator.  Integers are Python ints, so
nothing here can overflow.  The only inexact routine is :func:`mzv_partial`,
which returns an ``mpmath`` real carried at 96 bits.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterator, NamedTuple

import mpmath

__all__ = [
    "BilinearSolution",
    "coprime",
    "divisors",
    "euler_phi",
    "factorize",
    "iter_bilinear",
    "mobius",
    "mobius_weight",
    "mzv_partial",
    "sigma1",
]

_SIEVE_LIMIT = 1 << 12
MZV_PRECISION_BITS = 96


def _small_primes(limit: int) -> tuple[int, ...]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return tuple(i for i, f in enumerate(flags) if f)


_PRIMES = _small_primes(_SIEVE_LIMIT)


@lru_cache(maxsize=1 << 14)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Return the prime factorization of ``n`` as ``((p, e), ...)``, p ascending."""
    if n < 1:
        raise ValueError(f"factorize expects a positive integer, got {n}")
    out = []
    for p in _PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    else:
        # beyond the sieve: plain trial division by odd numbers
        p = _PRIMES[-1] + 2
        while p * p <= n:
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.append((p, e))
            p += 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def mobius(n: int) -> int:
    """Moebius function: 0 unless squarefree, else (-1)^(number of primes)."""
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def euler_phi(n: int) -> int:
    """Euler's totient."""
    out = n
    for p, _ in factorize(n):
        out -= out // p
    return out


@lru_cache(maxsize=1 << 14)
def _divisors(n: int) -> tuple[int, ...]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return tuple(sorted(divs))


def divisors(n: int) -> list[int]:
    """All positive divisors of ``n`` in increasing order."""
    return list(_divisors(n))


def sigma1(n: int) -> int:
    """Sum of the divisors of ``n``."""
    return sum(_divisors(n))


def mobius_weight(d: int, power: int = 2) -> Fraction:
    """Exact value of sum_{r | d} mu(r) / r**power as a Fraction."""
    out = Fraction(1)
    for p, _ in factorize(d):
        out *= 1 - Fraction(1, p**power)
    return out


class BilinearSolution(NamedTuple):
    """A positive solution of s1*w1 + s2*w2 = d."""

    s1: int
    w1: int
    s2: int
    w2: int


def iter_bilinear(d: int) -> Iterator[BilinearSolution]:
    """Yield every ordered positive (s1, w1, s2, w2) with s1*w1 + s2*w2 = d.

    Order: s1 ascending, then w1 ascending, then s2 ascending.  Each
    solution appears exactly once.
    """
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    for s1 in range(1, d):
        for w1 in range(1, (d - 1) // s1 + 1):
            rest = d - s1 * w1
            for s2 in _divisors(rest):
                yield BilinearSolution(s1, w1, s2, rest // s2)


def mzv_partial(kind: str, N: int) -> mpmath.mpf:
    """Partial sums of zeta(2), zeta(4), zeta(2,2) and zeta(1,3).

    The double sums run over s1 < s2 <= N and are accumulated in one pass
    using the running prefix sum of the inner variable.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    with mpmath.workprec(MZV_PRECISION_BITS):
        one = mpmath.mpf(1)
        if kind == "zeta2":
            return mpmath.fsum(one / (k * k) for k in range(1, N + 1))
        if kind == "zeta4":
            return mpmath.fsum(one / k**4 for k in range(1, N + 1))
        if kind not in ("z22", "z13"):
            raise ValueError(f"unknown MZV kind {kind!r}")
        inner_pow, outer_pow = (2, 2) if kind == "z22" else (1, 3)
        total = mpmath.mpf(0)
        prefix = mpmath.mpf(0)
        for s2 in range(2, N + 1):
            prefix += one / (s2 - 1) ** inner_pow
            total += prefix / mpmath.mpf(s2) ** outer_pow
        return total


def coprime(*args: int) -> bool:
    """True when the integers have gcd 1."""
    g = 0
    for a in args:
        g = gcd(g, a)
    return g == 1
