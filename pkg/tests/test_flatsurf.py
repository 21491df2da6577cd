import math
from fractions import Fraction
from math import gcd

import mpmath
import pytest
from hypothesis import assume, given, settings, strategies as st

from teichcount.counting import sv_constant
from teichcount.flatsurf import (
    CensusResult,
    EndsAtRegularPoint,
    FieldScalar,
    HitsZeroMidway,
    LandsOnZero,
    OutOfRange,
    RationalAlpha,
    build_surface,
    census,
    cylinder_census,
    cylinder_pieces,
    direction_cylinders,
    quadratic_fit,
    saddle_census,
    saddle_multiplicity,
    trace_ray,
)

SURFACES = [(1, 2), (1, 3), (2, 3), (1, 4), (3, 5), (2, 5)]


def fs(r, s=0):
    return FieldScalar(Fraction(r), Fraction(s), 2)


# -- FieldScalar -----------------------------------------------------------------

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=30)
scalars = st.builds(lambda r, s, N: FieldScalar(r, s, N), rationals, rationals, st.sampled_from([2, 3, 5]))


def _mp(x):
    return mpmath.mpf(x.r.numerator) / x.r.denominator + \
        mpmath.mpf(x.s.numerator) / x.s.denominator * mpmath.sqrt(x.N)


@given(scalars, rationals, rationals)
@settings(max_examples=300)
def test_field_arithmetic_matches_high_precision(x, r, s):
    y = FieldScalar(r, s, x.N)
    with mpmath.workdps(60):
        for got, want in ((x + y, _mp(x) + _mp(y)), (x - y, _mp(x) - _mp(y)), (x * y, _mp(x) * _mp(y))):
            assert abs(_mp(got) - want) < mpmath.mpf(10) ** -40
        if y != 0:
            assert abs(_mp(x / y) - _mp(x) / _mp(y)) < mpmath.mpf(10) ** -30


@given(scalars)
def test_field_sign_floor_mod(x):
    with mpmath.workdps(60):
        v = _mp(x)
        assert x.sign() == (v > 0) - (v < 0)
        assert x.floor() == int(mpmath.floor(v))
        m = x.mod(Fraction(2, 3))
        assert 0 <= m < Fraction(2, 3)
        assert ((x - m) / Fraction(2, 3)).is_rational()


@given(scalars, scalars)
def test_field_division_roundtrip(x, y):
    assume(y != 0 and y.N == x.N)
    assert (x / y) * y == x


def test_field_zero_division():
    with pytest.raises(ZeroDivisionError):
        fs(1, 1) / 0


# -- build_surface ----------------------------------------------------------------


def test_build_surface_examples():
    s = build_surface(1, 2)
    assert (s.a, s.a2) == (Fraction(1, 2), Fraction(3, 2))
    s = build_surface(1, 3)
    assert (s.a2 - s.a) % Fraction(2, 3) == 0
    assert s.a % Fraction(2, 3) == Fraction(1, 3)
    with pytest.raises(RationalAlpha):
        build_surface(1, 2, (1, 0, 2, 2))
    with pytest.raises(RationalAlpha):
        build_surface(1, 2, (1, 1, 4, 4))


@pytest.mark.parametrize("p,q,alpha", [(0, 2, (-1, 1, 2, 1)), (2, 4, (-1, 1, 2, 1)), (3, 2, (-1, 1, 2, 1)),
                                       (1, 2, (0, 1, 2, 1)), (1, 2, (1, 1, 2, 0))])
def test_build_surface_out_of_range(p, q, alpha):
    with pytest.raises(OutOfRange):
        build_surface(p, q, alpha)


def test_floors_are_exact():
    s = build_surface(1, 3, (-1, 1, 2, 1))
    with mpmath.workdps(50):
        al = mpmath.sqrt(2) - 1
        assert s.floors(3000) == [int(mpmath.floor(k * al)) for k in range(3001)]


# -- exact ray tracing ------------------------------------------------------------


def test_vertical_slit_side_lands_on_bottom_zero():
    s = build_surface(1, 2)
    down = (fs(0), fs(-1))
    rays = s.rays_from("top", down)
    assert {r.side for r in rays} == {"right", "left"}
    right = next(r for r in rays if r.side == "right")
    assert trace_ray(s, right, (fs(0), -2 * s.alpha)) == LandsOnZero("bot")


def test_lattice_period_returns_to_start():
    s = build_surface(1, 2)
    start = (fs(Fraction(1, 4)), fs(1))
    out = trace_ray(s, start, (fs(2), fs(0)))
    assert out == EndsAtRegularPoint(start)


def test_horizontal_ray_from_top_zero():
    s = build_surface(1, 2)
    ray = s.rays_from("top", (fs(1), fs(0)))[0]
    # reaching the top endpoint of the other slit at the end is a landing
    assert trace_ray(s, ray, (fs(1), fs(0))) == LandsOnZero("top")
    # going further, the same point is hit halfway
    out = trace_ray(s, ray, (fs(2), fs(0)))
    assert isinstance(out, HitsZeroMidway)
    assert out.zero == "top" and out.t == Fraction(1, 2)
    assert out.position == (fs(Fraction(3, 2)), s.alpha)


def _tracer_multiplicity(surf, m, n):
    v = (fs(Fraction(2 * m, surf.q)), 2 * n - 2 * surf.alpha)
    rays = surf.rays_from("top", v)
    return sum(trace_ray(surf, r, v) == LandsOnZero("bot") for r in rays)


@pytest.mark.parametrize("p,q", SURFACES[:4])
def test_kernel_matches_exact_tracer(p, q):
    surf = build_surface(p, q)
    for m in range(-3 * q, 3 * q + 1):
        for n in range(-3, 5):
            assert saddle_multiplicity(surf, m, n) == _tracer_multiplicity(surf, m, n), (m, n)


# -- saddle census ----------------------------------------------------------------


def test_vertical_candidate_has_multiplicity_two():
    s = build_surface(1, 2)
    assert saddle_multiplicity(s, 0, 0) == 2


@pytest.mark.parametrize("p,q", SURFACES[:3])
def test_multiplicity_symmetric_under_reversal(p, q):
    # reversing a connection gives one from z_bot to z_top with holonomy -v
    surf = build_surface(p, q)
    for m in range(-2 * q, 2 * q + 1):
        for n in range(-2, 4):
            v = (fs(Fraction(-2 * m, surf.q)), 2 * surf.alpha - 2 * n)
            back = sum(trace_ray(surf, r, v) == LandsOnZero("top") for r in surf.rays_from("bot", v))
            assert back == saddle_multiplicity(surf, m, n), (m, n)


@pytest.mark.parametrize("p,q", SURFACES)
def test_multiplicity_symmetric_under_reflection(p, q):
    # y -> -y swaps the zeros; reversing restores the direction of travel
    s = build_surface(p, q)
    for m in range(-4 * q, 4 * q + 1):
        for n in range(-6, 7):
            assert saddle_multiplicity(s, m, n) == saddle_multiplicity(s, -m, n)


def test_q2_has_no_single_saddles():
    res = saddle_census(build_surface(1, 2), 30)
    assert res.histogram[1] == 0
    assert res.ns1 == [0]


def test_q2_saddle_ratio():
    T = 80
    res = saddle_census(build_surface(1, 2), T)
    ratio = res.ns2[0] / (0.25 * 2 * math.pi * T * T)
    assert 0.85 <= ratio <= 1.15


def test_census_counts_are_monotone():
    res = census(build_surface(1, 3), [5, 10, 20])
    for xs in (res.ns1, res.ns2, res.nc):
        assert xs == sorted(xs)
    assert res.T == [5, 10, 20]


# -- cylinders --------------------------------------------------------------------


def test_horizontal_cylinders_q2():
    s = build_surface(1, 2)
    assert sorted(cylinder_pieces(s, 1, 0)) == [1, 1, 2]
    assert direction_cylinders(s, 1, 0) == (1, 1, 2)


def test_vertical_direction_has_two_cylinders():
    s = build_surface(1, 2)
    assert len(direction_cylinders(s, 0, 1)) == 2


@pytest.mark.parametrize("p,q", SURFACES)
def test_three_cylinders_in_nonvertical_directions(p, q):
    s = build_surface(p, q)
    for m in range(1, 21):
        for n in range(-10, 11):
            if gcd(m, n) != 1 or (2 * m / q) ** 2 + 4 * n * n > 400:
                continue
            pieces = sorted(cylinder_pieces(s, m, n))
            assert len(pieces) == 3 and pieces[2] == pieces[0] + pieces[1]
            assert tuple(pieces) == direction_cylinders(s, m, n)


def test_cylinder_census_q2_ratio():
    T = 80
    res = cylinder_census(build_surface(1, 2), [20, 40, 60, T])
    ratio = res.nc[-1] / (0.25 * 4.5 * math.pi * T * T)
    assert abs(ratio - 1) <= 0.15
    assert res.cylinder_patterns == {2: 1, 3: sum(res.cylinder_patterns.values()) - 1}


# -- fits -------------------------------------------------------------------------


def test_quadratic_fit_synthetic():
    T = [Fraction(t) for t in (10, 20, 30, 40)]
    res = CensusResult(1, 3, (-1, 1, 2, 1), T, [2 * int(t * t) for t in T], [int(t * t) for t in T],
                       [3 * int(t * t) for t in T])
    fits = quadratic_fit(res)
    assert fits["ns1"].coefficient == pytest.approx(2)
    assert fits["ns1"].slope == pytest.approx(2)
    assert fits["nc"].ratio == pytest.approx(3 / (0.25 * math.pi * float(sv_constant("c", 3))))


def test_quadratic_fit_needs_three_points():
    res = CensusResult(1, 2, (-1, 1, 2, 1), [Fraction(1), Fraction(2)], [0, 0], [1, 4], [1, 4])
    with pytest.raises(ValueError):
        quadratic_fit(res)


def test_quadratic_fit_nan_for_zero_constant():
    res = census(build_surface(1, 2), [10, 20, 30])
    assert math.isnan(quadratic_fit(res)["ns1"].ratio)
