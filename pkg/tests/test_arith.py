from fractions import Fraction
from math import gcd, pi

import mpmath
import pytest
from hypothesis import given, strategies as st

from teichcount.arith import (
    coprime,
    divisors,
    euler_phi,
    factorize,
    iter_bilinear,
    mobius,
    mobius_weight,
    mzv_partial,
    sigma1,
)


@pytest.mark.parametrize("n,expected", [(1, 1), (6, 1), (12, 0)])
def test_mobius_examples(n, expected):
    assert mobius(n) == expected


@pytest.mark.parametrize("n,expected", [(1, 1), (3, 2), (12, 4)])
def test_euler_phi_examples(n, expected):
    assert euler_phi(n) == expected


def test_divisor_examples():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert sigma1(4) == 7
    assert divisors(1) == [1]


@pytest.mark.parametrize("bad", [0, -3])
def test_nonpositive_rejected(bad):
    with pytest.raises(ValueError):
        mobius(bad)
    with pytest.raises(ValueError):
        divisors(bad)


@given(st.integers(1, 5000))
def test_mobius_sum_over_divisors(n):
    assert sum(mobius(e) for e in divisors(n)) == (1 if n == 1 else 0)


@given(st.integers(1, 5000))
def test_phi_sum_over_divisors(n):
    assert sum(euler_phi(e) for e in divisors(n)) == n


@given(st.integers(1, 3000))
def test_divisors_brute_force(n):
    assert divisors(n) == [e for e in range(1, n + 1) if n % e == 0]
    assert sigma1(n) == sum(divisors(n))


@given(st.integers(1, 300), st.integers(1, 300))
def test_multiplicativity(a, b):
    if gcd(a, b) != 1:
        return
    assert mobius(a * b) == mobius(a) * mobius(b)
    assert euler_phi(a * b) == euler_phi(a) * euler_phi(b)
    assert sigma1(a * b) == sigma1(a) * sigma1(b)


@given(st.integers(2, 10**6))
def test_factorize_roundtrip(n):
    prod = 1
    for p, k in factorize(n):
        assert all(p % q for q in range(2, int(p**0.5) + 1))
        prod *= p**k
    assert prod == n


@given(st.integers(1, 3000), st.integers(1, 4))
def test_mobius_weight_matches_divisor_sum(d, power):
    assert mobius_weight(d, power) == sum(Fraction(mobius(r), r**power) for r in divisors(d))


def test_coprime():
    assert coprime(4, 9)
    assert not coprime(4, 6)


def test_iter_bilinear_examples():
    assert list(iter_bilinear(1)) == []
    assert [tuple(s) for s in iter_bilinear(2)] == [(1, 1, 1, 1)]
    assert {tuple(s) for s in iter_bilinear(3)} == {(1, 1, 1, 2), (1, 1, 2, 1), (1, 2, 1, 1), (2, 1, 1, 1)}


@pytest.mark.parametrize("d", range(1, 25))
def test_iter_bilinear_brute_force(d):
    got = [tuple(s) for s in iter_bilinear(d)]
    brute = [(s1, w1, s2, w2)
             for s1 in range(1, d + 1) for w1 in range(1, d + 1)
             for s2 in range(1, d + 1) for w2 in range(1, d + 1)
             if s1 * w1 + s2 * w2 == d]
    assert len(got) == len(set(got))
    assert sorted(got) == sorted(brute)
    assert got == sorted(got, key=lambda t: (t[0], t[1], t[2]))


def test_mzv_small_cutoff():
    assert mzv_partial("z22", 2) == mpmath.mpf(1) / 4


def test_mzv_limits():
    N = 10**4
    z22 = mzv_partial("z22", N)
    z13 = mzv_partial("z13", N)
    assert abs(z22 / (mpmath.pi**4 / 120) - 1) < 1e-3
    assert abs(z13 / (mpmath.pi**4 / 360) - 1) < 1e-3
    assert abs(mzv_partial("zeta2", N) - pi**2 / 6) < 1e-3


def test_mzv_rejects_unknown_kind():
    with pytest.raises(ValueError):
        mzv_partial("z31", 10)
