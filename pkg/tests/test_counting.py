from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from teichcount.counting import (
    KINDS,
    Stratum,
    asymptotic_ratio,
    constants_report,
    count_covers,
    count_covers_trusted,
    count_primitive,
    count_primitive_closed,
    covers_table,
    generic_constant,
    h2_printed_delta,
    sv_constant,
    theorem_constant,
    volume_estimate,
)


def closed_theorem(kind, q):
    """Closed forms of the billiard constants, written out independently."""
    return {
        "c": Fraction(10 * q - 11, 2 * q - 2),
        "s1": Fraction(27 * (q - 2), 8 * (q - 1)),
        "s2": Fraction(5 * q + 6, 8 * (q - 1)),
    }[kind]


@pytest.mark.parametrize("stratum,d,expected", [("H11", 1, 0), ("H11", 2, 4), ("H2", 3, 5)])
def test_count_covers_examples(stratum, d, expected):
    assert count_covers(stratum, d) == expected


def test_printed_h2_delta():
    assert h2_printed_delta(3) == 2
    assert count_covers_trusted("H2", 3) == 3
    assert all(h2_printed_delta(d) == 0 for d in (1, 2, 4, 5, 7, 8))


@pytest.mark.parametrize("stratum,d,expected", [("H11", 2, 4), ("H11", 3, 16), ("H2", 4, 9)])
def test_count_primitive_examples(stratum, d, expected):
    assert count_primitive(stratum, d) == expected


@pytest.mark.parametrize("stratum,d,expected", [("H11", 3, 16), ("H2", 3, 3), ("H2", 4, 9)])
def test_count_primitive_closed_examples(stratum, d, expected):
    assert count_primitive_closed(stratum, d) == expected


@given(st.sampled_from(list(Stratum)), st.integers(3, 400))
@settings(max_examples=60, deadline=None)
def test_primitive_closed_form_agrees(stratum, d):
    assert count_primitive(stratum, d) == count_primitive_closed(stratum, d)


@pytest.mark.parametrize("kind,expected", [
    ("c", Fraction(19, 4)), ("s1", Fraction(27, 16)), ("s2", Fraction(21, 16)),
])
def test_sv_constant_degree_three(kind, expected):
    assert sv_constant(kind, 3) == expected


def test_sv_constant_degree_two_from_table():
    assert sv_constant("s1", 2) == 0
    r = constants_report(2)
    assert (r.c, r.s1, r.s2, r.source) == (Fraction(9, 2), 0, 2, "theorem-table")


@pytest.mark.parametrize("kind,q,expected", [
    ("c", 2, Fraction(9, 2)), ("s1", 5, Fraction(81, 32)), ("s2", 3, Fraction(21, 16)),
])
def test_theorem_constant_examples(kind, q, expected):
    assert theorem_constant(kind, q) == expected


@pytest.mark.parametrize("q", list(range(3, 41)))
def test_sv_constant_matches_theorem(q):
    for kind in KINDS:
        assert sv_constant(kind, q) == closed_theorem(kind, q) == theorem_constant(kind, q)


@pytest.mark.parametrize("kind,expected", [("s1", Fraction(27, 8)), ("s2", Fraction(5, 8)), ("c", Fraction(5))])
def test_generic_constants(kind, expected):
    assert generic_constant(kind) == expected
    # the degree-q constants approach the generic ones
    assert abs(sv_constant(kind, 100) - expected) < abs(sv_constant(kind, 10) - expected)


def test_asymptotic_ratio_examples():
    assert asymptotic_ratio("H11", 3) == pytest.approx(2 / 3)
    assert asymptotic_ratio("H11", 1000) == pytest.approx(0.999)
    assert asymptotic_ratio("H2", 4) == pytest.approx(0.5)


def test_covers_table_matches_pointwise():
    for stratum in Stratum:
        table = covers_table(stratum, 60)
        assert table[0] == 0
        assert table[1:] == [count_covers(stratum, d) for d in range(1, 61)]
    trusted = covers_table("H2", 60, printed=False)
    assert trusted[1:] == [count_covers_trusted("H2", d) for d in range(1, 61)]


def test_volume_examples():
    assert volume_estimate("H11", 1).value == 0
    for stratum, target in ((Stratum.H11, mpmath.pi**4 / 135), (Stratum.H2, mpmath.pi**4 / 120)):
        big = volume_estimate(stratum, 2000)
        small = volume_estimate(stratum, 200)
        assert abs(big.target - target) < 1e-12
        assert big.relative_error < 0.10
        assert big.relative_error < small.relative_error


def test_bad_arguments():
    with pytest.raises(ValueError):
        count_covers("H11", 0)
    with pytest.raises(ValueError):
        count_primitive("H2", 1)
    with pytest.raises(ValueError):
        generic_constant("x")
    with pytest.raises(ValueError):
        volume_estimate("H2", 0)
