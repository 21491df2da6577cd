from math import gcd, lcm

import pytest
from hypothesis import given, settings, strategies as st

from teichcount.counting import Stratum
from teichcount.cover_enum import CylCoords11, enumerate_fiber, is_primitive
from teichcount.moves import (
    NotPrimitive,
    PreconditionFailed,
    Singular,
    SlitTorusState,
    canonical_state,
    from_slit_torus_state,
    move_horizontal,
    move_horizontal_inverse,
    move_vertical,
    normalize_to_canonical,
    smith_normal_form,
    to_slit_torus,
)
from teichcount.moves import canonical_slit_torus, collapse_case, collapse_due
from teichcount.origami import from_state, push, to_state

PRIMITIVE = {d: [s for s in enumerate_fiber(Stratum.H11, d) if is_primitive(s)] for d in range(2, 10)}
ALL = {d: list(enumerate_fiber(Stratum.H11, d)) for d in range(2, 9)}

primitive_states = st.integers(3, 9).flatmap(lambda d: st.sampled_from(PRIMITIVE[d]))


def _mul(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def _det(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


# -- horizontal move ----------------------------------------------------------


def test_horizontal_examples():
    s = CylCoords11(1, 1, 2, 1, 1, 1, 0, 0, 0)
    r = move_horizontal(s)
    assert (r.t1, r.t2, r.t3) == (0, 1, 2)
    s = CylCoords11(-1, 1, 1, 1, 1, 0, 0, 0, 0)
    assert move_horizontal(s) == CylCoords11(-1, 1, 1, 1, 1, 0, 0, 0, 1)


@given(primitive_states)
def test_horizontal_periodic(s):
    s_ = s
    for _ in range(lcm(s.w1, s.w2, s.w1 + s.w2)):
        s_ = move_horizontal(s_)
    assert s_ == s


@given(primitive_states)
def test_horizontal_inverse(s):
    assert move_horizontal_inverse(move_horizontal(s)) == s
    assert move_horizontal(move_horizontal_inverse(s)) == s


# -- vertical move ------------------------------------------------------------


def test_vertical_generic():
    s = CylCoords11(1, 1, 2, 4, 5, 3, 0, 0, 0)
    assert move_vertical(s) == CylCoords11(1, 1, 2, 4, 5, 2, 0, 0, 0)


def test_vertical_collapse_keeps_widths():
    # sigma=+1, k3=1 and t3 < w1: the wide cylinder collapses without regrouping
    s = CylCoords11(1, 2, 3, 1, 1, 1, 0, 0, 1)
    assert collapse_due(s) and collapse_case(s) == "A"
    r = move_vertical(s)
    assert (r.sigma, r.w1, r.w2) == (-1, 2, 3)


def test_vertical_collapse_regroups_widths():
    # sigma=+1, t3 > w1, widths (1,2): new narrow widths (w1, w2-w1) = (1,1)
    s = CylCoords11(1, 1, 2, 1, 1, 1, 0, 0, 2)
    assert collapse_case(s) == "B"
    r = move_vertical(s)
    assert (r.w1, r.w2) == (1, 1)
    assert r.d == s.d


def _push_loop(s, direction):
    o = from_state(s)
    for _ in range(o.n):
        o = push(o, 1, direction)
    return to_state(o)


@pytest.mark.parametrize("d", range(2, 8))
def test_moves_match_origami_engine(d):
    # F_h pushes the second zero east once around; F_v pushes it north or
    # south, whichever shrinks the wide cylinder
    for s in PRIMITIVE.get(d, []):
        assert move_horizontal(s) == _push_loop(s, "E")
        assert move_horizontal_inverse(s) == _push_loop(s, "W")
        assert move_vertical(s) == _push_loop(s, "N" if s.sigma == 1 else "S")


@pytest.mark.parametrize("d", range(2, 8))
@pytest.mark.parametrize("direction", "NESW")
def test_fixed_direction_loops_permute_the_fiber(d, direction):
    images = [_push_loop(s, direction) for s in ALL[d]]
    assert sorted(images) == sorted(ALL[d])


def test_vertical_move_is_not_injective():
    # the direction depends on sigma, so two states can share an image
    a = CylCoords11(1, 1, 2, 1, 1, 1, 0, 0, 2)
    b = CylCoords11(-1, 1, 1, 1, 2, 0, 0, 0, 1)
    assert move_vertical(a) == move_vertical(b) == CylCoords11(1, 1, 1, 1, 2, 1, 0, 0, 1)


def test_vertical_rejects_non_primitive():
    s = CylCoords11(1, 1, 2, 2, 2, 1, 0, 0, 0)
    with pytest.raises(NotPrimitive):
        move_vertical(s)


@given(primitive_states, st.lists(st.sampled_from([move_horizontal, move_horizontal_inverse, move_vertical]),
                                   max_size=30))
@settings(max_examples=200, deadline=None)
def test_moves_preserve_primitivity(s, path):
    for f in path:
        s = f(s)
        assert is_primitive(s)


# -- origami round trip -------------------------------------------------------


@pytest.mark.parametrize("d", range(2, 9))
def test_origami_roundtrip(d):
    for s in ALL[d]:
        assert to_state(from_state(s)) == s


# -- slit tori ------------------------------------------------------------------


def test_to_slit_torus_degree_two():
    seen = []
    for s in ALL[2]:
        try:
            t = to_slit_torus(s)
        except PreconditionFailed:
            continue
        assert abs(_det(t.L)) == 2
        assert t.u in ((0, 0), (0, 1), (1, 0))
        seen.append(t)
    assert seen


@pytest.mark.parametrize("d", range(2, 9))
def test_slit_torus_area_and_primitivity(d):
    for s in ALL[d]:
        if s.w1 != s.w2:
            with pytest.raises(PreconditionFailed):
                to_slit_torus(s)
            continue
        try:
            t = to_slit_torus(s)
        except PreconditionFailed:
            continue
        assert t.d == d
        assert t.generates() == is_primitive(s)
        assert from_slit_torus_state(t) == s


def test_canonical_slit_torus():
    for d in range(2, 12):
        t = canonical_slit_torus(d)
        assert t == SlitTorusState.make(((1, 0), (0, d)), (0, 1))
        assert t.generates()
        assert to_slit_torus(canonical_state(d)) == t


# -- Smith normal form -----------------------------------------------------------


@pytest.mark.parametrize("M,expected", [
    (((1, 0), (0, 6)), (1, 6)),
    (((2, 1), (0, 3)), (1, 6)),
    (((2, 0), (0, 2)), (2, 2)),
])
def test_smith_examples(M, expected):
    f = smith_normal_form(M)
    assert (f.d1, f.d2) == expected


entries = st.integers(-50, 50)


@given(st.tuples(st.tuples(entries, entries), st.tuples(entries, entries)))
def test_smith_properties(M):
    if _det(M) == 0:
        with pytest.raises(Singular):
            smith_normal_form(M)
        return
    f = smith_normal_form(M)
    assert _mul(_mul(f.P, M), f.Q) == ((f.d1, 0), (0, f.d2))
    assert abs(_det(f.P)) == abs(_det(f.Q)) == 1
    assert f.d1 > 0 and f.d2 > 0 and f.d2 % f.d1 == 0
    assert f.d1 == gcd(gcd(M[0][0], M[0][1]), gcd(M[1][0], M[1][1]))
    assert f.d1 * f.d2 == abs(_det(M))


# -- normalization --------------------------------------------------------------


def test_normalize_canonical_is_empty():
    for d in range(3, 10):
        assert normalize_to_canonical(canonical_state(d)).moves == []


def test_normalize_all_degree_three():
    assert len(PRIMITIVE[3]) == 16
    for s in PRIMITIVE[3]:
        tr = normalize_to_canonical(s)
        if s == canonical_state(3):
            assert tr.moves == []
        else:
            assert tr.final == canonical_slit_torus(3)


@pytest.mark.parametrize("d", range(4, 10))
def test_normalize_all_primitive(d):
    for s in PRIMITIVE[d]:
        tr = normalize_to_canonical(s)
        assert tr.final == (s if s == canonical_state(d) else canonical_slit_torus(d))
        assert len(tr.moves) <= 10 * d**3


def test_normalize_rejects_non_primitive():
    with pytest.raises(NotPrimitive):
        normalize_to_canonical(CylCoords11(1, 1, 2, 2, 2, 1, 0, 0, 0))


@pytest.mark.parametrize("d", range(3, 8))
def test_loops_alone_connect_primitive_states(d):
    # F_h^{+-1} with vertical loops in both directions, no Smith endgame
    start = canonical_state(d)
    seen = {start}
    stack = [start]
    while stack:
        s = stack.pop()
        for t in (move_horizontal(s), move_horizontal_inverse(s), _push_loop(s, "N"), _push_loop(s, "S")):
            if t not in seen:
                seen.add(t)
                stack.append(t)
    assert seen == set(PRIMITIVE[d])
