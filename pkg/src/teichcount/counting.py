"""Closed-form counts, Siegel-Veech constants and volume limits.

Everything that the acceptance identities compare is exact
(:class:`fractions.Fraction` or int).  Floats appear only in the volume
estimates and asymptotic ratios.

Two routes exist for the total cover counts.  :func:`count_covers` evaluates
the printed sums term by term for one degree.  :func:`covers_table` fills a
whole table ``N_1 .. N_D`` at once with numpy slice arithmetic on int64,
which is what makes the D = 2000 volume sweep take seconds.  The two are
checked against each other in the test suite.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import NamedTuple

import mpmath
import numpy as np

from .arith import (
    divisors,
    euler_phi,
    iter_bilinear,
    mobius,
    mobius_weight,
)

__all__ = [
    "ConstantsReport",
    "NonIntegerResult",
    "Stratum",
    "VolumeEstimate",
    "asymptotic_ratio",
    "constants_report",
    "count_covers",
    "count_covers_trusted",
    "count_primitive",
    "count_primitive_closed",
    "covers_table",
    "generic_constant",
    "h2_printed_delta",
    "sv_constant",
    "theorem_constant",
    "volume_estimate",
]

KINDS = ("c", "s1", "s2")


class Stratum(str, enum.Enum):
    """The two genus-2 strata."""

    H11 = "H11"
    H2 = "H2"


class NonIntegerResult(ArithmeticError):
    """A closed form that must be an integer was not."""


def _as_stratum(stratum) -> Stratum:
    return stratum if isinstance(stratum, Stratum) else Stratum(str(stratum))


# ---------------------------------------------------------------------------
# total counts


def _h2_two_cylinder_sum(d: int, coprime_heights: bool = False, scale: int = 1) -> int:
    """sum over h1*u1 + h2*u2 = d with u1 < u2 of scale*u1*u2."""
    total = 0
    for h1, u1, h2, u2 in iter_bilinear(d):
        if u1 < u2 and (not coprime_heights or gcd(h1, h2) == 1):
            total += scale * u1 * u2
    return total


def count_covers(stratum, d: int) -> int:
    """Number of degree-d covers of the standard torus, as printed.

    H11 counts covers branched over two points with simple branching.  H2
    counts covers with one double branch point and includes the extra
    (2/3) term for symmetric one-cylinder surfaces exactly as written; see
    :func:`count_covers_trusted` for the value the enumeration produces.
    """
    stratum = _as_stratum(stratum)
    if d < 1:
        raise ValueError("d must be positive")
    if stratum is Stratum.H11:
        total = 0
        for s1, w1, s2, w2 in iter_bilinear(d):
            total += w1 * w2 * (w1 + w2) * min(s1, s2)
        if d % 2 == 0:
            for s in divisors(d // 2):
                w = d // (2 * s)
                total += 2 * w * w * s
        return total
    total = Fraction(_h2_two_cylinder_sum(d))
    for h in divisors(d):
        m = d // h
        total += Fraction(comb(m - 1, 2) * m, 3)
        if m % 3 == 0:
            total += Fraction(2 * m, 3)
    if total.denominator != 1:
        raise NonIntegerResult(f"N_{d}(2) evaluated to {total}")
    return int(total)


def h2_printed_delta(d: int) -> int:
    """The printed H2 count minus the enumerated one: (2/3) sum_{3 | d/h} d/h."""
    return sum(2 * (d // h) // 3 for h in divisors(d) if (d // h) % 3 == 0)


def count_covers_trusted(stratum, d: int) -> int:
    """Cover counts that agree with enumeration and the monodromy oracle."""
    stratum = _as_stratum(stratum)
    if stratum is Stratum.H11:
        return count_covers(stratum, d)
    return count_covers(stratum, d) - h2_printed_delta(d)


# ---------------------------------------------------------------------------
# primitive counts


def count_primitive(stratum, d: int) -> int:
    """Primitive cover counts via the Moebius-inverted sums."""
    stratum = _as_stratum(stratum)
    if d < 2:
        raise ValueError("d must be at least 2")
    if stratum is Stratum.H11:
        if d == 2:
            return 4
        total = 0
        for r in divisors(d):
            mu = mobius(r)
            if mu == 0:
                continue
            inner = 0
            for s1, u1, s2, u2 in iter_bilinear(d // r):
                if gcd(s1, s2) == 1:
                    inner += u1 * u2 * (u1 + u2) * min(s1, s2)
            total += mu * r * r * inner
        return total
    if d == 2:
        return 0
    if d == 3:
        return 3
    total = Fraction(0)
    for r in divisors(d):
        mu = mobius(r)
        if mu == 0:
            continue
        m = d // r
        inner = Fraction(_h2_two_cylinder_sum(m, coprime_heights=True, scale=r))
        inner += Fraction(comb(m - 1, 2) * d, 3)
        total += mu * inner
    if total.denominator != 1:
        raise NonIntegerResult(f"N^P_{d}(2) evaluated to {total}")
    return int(total)


def count_primitive_closed(stratum, d: int) -> int:
    """(1/3) d^3 (d-1) W(d) for H11 and (3/8) d^2 (d-2) W(d) for H2.

    Here W(d) = sum_{r | d} mu(r)/r^2 = prod_{p | d} (1 - 1/p^2).
    """
    stratum = _as_stratum(stratum)
    if d < 3:
        raise ValueError("d must be at least 3")
    weight = mobius_weight(d, 2)
    if stratum is Stratum.H11:
        value = Fraction(d**3 * (d - 1), 3) * weight
    else:
        value = Fraction(3 * d * d * (d - 2), 8) * weight
    if value.denominator != 1:
        raise NonIntegerResult(f"closed form for {stratum.value} at d={d} is {value}")
    return int(value)


def asymptotic_ratio(stratum, d: int) -> float:
    """Primitive count divided by its leading asymptotic term."""
    stratum = _as_stratum(stratum)
    if d < 3:
        raise ValueError("d must be at least 3")
    lead = Fraction(d**4, 3) if stratum is Stratum.H11 else Fraction(3 * d**3, 8)
    ratio = Fraction(count_primitive(stratum, d)) / (lead * mobius_weight(d, 2))
    return float(ratio)


# ---------------------------------------------------------------------------
# Siegel-Veech constants


def theorem_constant(kind: str, q: int) -> Fraction:
    """Closed forms of c(q), s1(q), s2(q)."""
    if q < 2:
        raise ValueError("q must be at least 2")
    if kind not in KINDS:
        raise ValueError(f"unknown constant {kind!r}")
    if q == 2:
        return {"c": Fraction(9, 2), "s1": Fraction(0), "s2": Fraction(2)}[kind]
    if kind == "c":
        return Fraction(10 * q - 11, 2 * q - 2)
    if kind == "s1":
        return Fraction(27 * (q - 2), 8 * (q - 1))
    return Fraction(5 * q + 6, 8 * (q - 1))


class _PiMonomial(NamedTuple):
    """coefficient * pi**power, enough to cancel the transcendental parts."""

    coeff: Fraction
    power: int

    def __mul__(self, other):
        return _PiMonomial(self.coeff * other.coeff, self.power + other.power)

    def __truediv__(self, other):
        return _PiMonomial(self.coeff / other.coeff, self.power - other.power)

    def scaled(self, k) -> "_PiMonomial":
        return _PiMonomial(self.coeff * Fraction(k), self.power)


_NU_H2 = _PiMonomial(Fraction(1, 120), 4)
_NU_H11 = _PiMonomial(Fraction(1, 135), 4)
_NU_TORUS = _PiMonomial(Fraction(1, 3), 2)
_ZETA2 = _PiMonomial(Fraction(1, 6), 2)


def generic_constant(kind: str) -> Fraction:
    """Constants of a generic genus-2 surface with two simple zeros."""
    if kind == "s1":
        value = (_NU_H2 / _NU_H11).scaled(3)
    elif kind == "s2":
        value = (_NU_TORUS * _NU_TORUS / _NU_H11).scaled(Fraction(1, 24))
    elif kind == "c":
        value = (_ZETA2 * _NU_TORUS / _NU_H11).scaled(Fraction(2, 3))
    else:
        raise ValueError(f"unknown constant {kind!r}")
    if value.power != 0:
        raise ArithmeticError(f"pi does not cancel in {kind}")
    return value.coeff


def _c_weight(s1: int, u1: int, s2: int, u2: int) -> Fraction:
    w = u1 + u2
    # u1 u2 w (1/u1^2 + 1/u2^2 + 1/w^2), written over the denominator u1 u2 w
    num = (u2 * w) ** 2 + (u1 * w) ** 2 + (u1 * u2) ** 2
    return Fraction(num * min(s1, s2), u1 * u2 * w)


def _sv_formula(kind: str, d: int) -> Fraction:
    npd11 = count_primitive(Stratum.H11, d)
    if kind == "s1":
        return Fraction(3 * d * count_primitive(Stratum.H2, d), npd11)
    if kind == "c":
        total = Fraction(0)
        for r in divisors(d):
            mu = mobius(r)
            if mu == 0:
                continue
            inner = Fraction(0)
            for s1, u1, s2, u2 in iter_bilinear(d // r):
                if gcd(s1, s2) == 1:
                    inner += _c_weight(s1, u1, s2, u2)
            total += mu * inner
        return d * total / npd11
    # s2
    first = 0
    for r in divisors(d):
        mu = mobius(r)
        if mu:
            first += mu * _h2_two_cylinder_sum(d // r, coprime_heights=True, scale=r)
    second = Fraction(0)
    for w in divisors(d):
        if w == d:
            continue
        inner = sum(Fraction(mobius(r), r) for r in divisors(w))
        second += euler_phi(d // w) * inner * w * w
    third = Fraction(d * euler_phi(d), 2)
    return Fraction(d, npd11) * (first + second + third)


def sv_constant(kind: str, d: int) -> Fraction:
    """c(d), s1(d) or s2(d) as an exact rational.

    For d >= 3 this evaluates the formulas in terms of primitive counts.
    Those formulas are stated only for d >= 3, so d = 2 returns the table
    values instead (see :func:`constants_report` for the source flag).
    """
    if kind not in KINDS:
        raise ValueError(f"unknown constant {kind!r}")
    if d < 2:
        raise ValueError("d must be at least 2")
    if d == 2:
        return theorem_constant(kind, 2)
    return _sv_formula(kind, d)


@dataclass(frozen=True)
class ConstantsReport:
    """Exact constants for one degree together with their closed forms."""

    d: int
    c: Fraction
    s1: Fraction
    s2: Fraction
    theorem_c: Fraction
    theorem_s1: Fraction
    theorem_s2: Fraction
    source: str
    identity_ok: dict = field(default_factory=dict)


def constants_report(d: int) -> ConstantsReport:
    values = {k: sv_constant(k, d) for k in KINDS}
    closed = {k: theorem_constant(k, d) for k in KINDS}
    return ConstantsReport(
        d=d,
        c=values["c"],
        s1=values["s1"],
        s2=values["s2"],
        theorem_c=closed["c"],
        theorem_s1=closed["s1"],
        theorem_s2=closed["s2"],
        source="theorem-table" if d == 2 else "formula",
        identity_ok={k: values[k] == closed[k] for k in KINDS},
    )


# ---------------------------------------------------------------------------
# tables and volumes


def _divisor_power_table(D: int, j: int) -> np.ndarray:
    """out[b] = sum_{w | b} w**j for 0 < b <= D."""
    out = np.zeros(D + 1, dtype=np.int64)
    for w in range(1, D + 1):
        out[w::w] += w**j
    return out


def _h11_table(D: int) -> np.ndarray:
    # F(d) = sum_{s1,w1} w1^2 P1(d - s1 w1; s1) + w1 P2(d - s1 w1; s1), with
    # Pj(b; s1) = sum_{s2 w2 = b} w2^j min(s1, s2) = sum_{k <= s1} Qj_k(b)
    # and Qj_k(b) = sum_{s2 | b, s2 >= k} (b / s2)^j.
    F = np.zeros(D + 1, dtype=np.int64)
    q1 = _divisor_power_table(D, 1)
    q2 = _divisor_power_table(D, 2)
    p1 = np.zeros(D + 1, dtype=np.int64)
    p2 = np.zeros(D + 1, dtype=np.int64)
    for s1 in range(1, D):
        if s1 > 1:
            k = s1 - 1
            w = np.arange(1, D // k + 1, dtype=np.int64)
            q1[k :: k] -= w
            q2[k :: k] -= w * w
        p1 += q1
        p2 += q2
        for w1 in range(1, (D - 1) // s1 + 1):
            a = s1 * w1
            F[a + 1 :] += w1 * w1 * p1[1 : D - a + 1] + w1 * p2[1 : D - a + 1]
    for d in range(2, D + 1, 2):
        for s in divisors(d // 2):
            w = d // (2 * s)
            F[d] += 2 * w * w * s
    return F


def _h2_table(D: int, printed: bool) -> list:
    G = np.zeros(D + 1, dtype=np.int64)
    R = _divisor_power_table(D, 1)  # sum of w2 over h2 w2 = b with w2 > w1
    for w1 in range(1, D):
        R[w1::w1] -= w1
        for h1 in range(1, (D - 1) // w1 + 1):
            a = h1 * w1
            G[a + 1 :] += w1 * R[1 : D - a + 1]
    out = [0] * (D + 1)
    for d in range(1, D + 1):
        total3 = 0
        for h in divisors(d):
            m = d // h
            total3 += comb(m - 1, 2) * m
            if printed and m % 3 == 0:
                total3 += 2 * m
        if total3 % 3:
            raise NonIntegerResult(f"one-cylinder term at d={d}")
        out[d] = int(G[d]) + total3 // 3
    return out


def covers_table(stratum, D: int, printed: bool = True) -> list[int]:
    """[N_0, N_1, ..., N_D] for a stratum, computed for all degrees at once."""
    stratum = _as_stratum(stratum)
    # int64 headroom: N_d(1,1) < d^4 * zeta(3) / 3 * 4 keeps well under 2^63 here
    if D > 20000:
        raise ValueError("covers_table is limited to D <= 20000")
    if stratum is Stratum.H11:
        return [int(x) for x in _h11_table(D)]
    return _h2_table(D, printed)


@dataclass(frozen=True)
class VolumeEstimate:
    stratum: Stratum
    D: int
    value: mpmath.mpf
    target: mpmath.mpf
    relative_error: float


def volume_estimate(stratum, D: int, printed: bool = True) -> VolumeEstimate:
    """Normalized partial sums of N_d approximating the stratum volume.

    n / D^(n/2) * sum_{d <= D} N_d with n = 10 for H11 and n = 8 for H2.
    """
    stratum = _as_stratum(stratum)
    if D < 1:
        raise ValueError("D must be positive")
    table = covers_table(stratum, D, printed=printed)
    total = sum(table)
    with mpmath.workprec(96):
        if stratum is Stratum.H11:
            value = mpmath.mpf(10 * total) / mpmath.mpf(D) ** 5
            target = mpmath.pi**4 / 135
        else:
            value = mpmath.mpf(8 * total) / mpmath.mpf(D) ** 4
            target = mpmath.pi**4 / 120
        rel = abs(value - target) / target
    return VolumeEstimate(stratum, D, value, target, float(rel))
