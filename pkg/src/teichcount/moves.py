"""Kernel-foliation moves on primitive three-cylinder covers.

The horizontal move pushes the second zero once around the horizontal
loop of the base torus; the vertical move pushes it once around the
vertical loop (downwards when ``sigma = -1``).  Both act on the discrete
coordinates of :class:`~teichcount.cover_enum.CylCoords11`.

When the vertical move empties the wide cylinder (its height reaches
``0 -+ eps``) the cylinders are re-cut.  The resulting rules were read
off exact cut-and-paste computations on square tilings (see
:mod:`teichcount.origami` and ``docs/collapse_rules.md``):

* case B, when ``w1 < t3 - sigma*eps < w2``: the cylinder widths become
  ``(w1, w2 - w1 | w2)``;
* case A otherwise: widths stay and ``sigma`` changes sign.

Once the narrow widths agree, the surface is a torus ``R^2 / L`` with two
crossed slits offset by ``u``, and an element of ``SL(2, Z)`` moves it to
the standard pair ``L = Z x dZ``, ``u = (0, 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Union

from .cover_enum import CylCoords11, is_primitive
from .origami import OrigamiError, cut_slits, from_slit_torus, from_state, to_state

__all__ = [
    "Move",
    "NonTermination",
    "NormalizationTrace",
    "NotPrimitive",
    "PreconditionFailed",
    "Singular",
    "SlitTorusState",
    "SmithForm",
    "ThreeCylState",
    "canonical_state",
    "from_slit_torus_state",
    "move_horizontal",
    "move_horizontal_inverse",
    "move_vertical",
    "normalize_to_canonical",
    "smith_normal_form",
    "to_slit_torus",
]

# The degree is the derived property ``CylCoords11.d``.
ThreeCylState = CylCoords11

Matrix = tuple[tuple[int, int], tuple[int, int]]


class NotPrimitive(ValueError):
    """The state covers the base torus through a larger torus."""


class PreconditionFailed(ValueError):
    """The state is not in the shape the operation needs."""


class Singular(ValueError):
    """Smith reduction of a matrix with zero determinant."""


class NonTermination(RuntimeError):
    """Normalization exceeded its step budget."""


# ---------------------------------------------------------------------------
# fiber moves


def move_horizontal(s: ThreeCylState) -> ThreeCylState:
    """Push the second zero once around the horizontal loop."""
    e = s.sigma
    out = CylCoords11(s.sigma, s.w1, s.w2, s.s1, s.s2, s.k3,
                      (s.t1 + e) % s.w1, (s.t2 + e) % s.w2, (s.t3 - e) % (s.w1 + s.w2))
    return out.canonical()


def move_horizontal_inverse(s: ThreeCylState) -> ThreeCylState:
    e = s.sigma
    out = CylCoords11(s.sigma, s.w1, s.w2, s.s1, s.s2, s.k3,
                      (s.t1 - e) % s.w1, (s.t2 - e) % s.w2, (s.t3 + e) % (s.w1 + s.w2))
    return out.canonical()


def collapse_due(s: ThreeCylState) -> bool:
    """True when the next vertical move empties the wide cylinder."""
    return s.k3 == (1 if s.sigma == 1 else 0)


def collapse_case(s: ThreeCylState) -> str:
    """``"B"`` when ``w1 < t3 - sigma*eps < w2`` (C1 the narrower), else ``"A"``."""
    s = s if s.w1 <= s.w2 else s.swapped()
    if s.sigma == 1:
        return "B" if s.w1 < s.t3 <= s.w2 else "A"
    return "B" if s.w1 <= s.t3 < s.w2 else "A"


def move_vertical(s: ThreeCylState) -> ThreeCylState:
    """Push the second zero once around the vertical loop, up for sigma = +1."""
    if not is_primitive(s):
        raise NotPrimitive(f"{s} is not primitive")
    if not collapse_due(s):
        return CylCoords11(s.sigma, s.w1, s.w2, s.s1, s.s2, s.k3 - 1, s.t1, s.t2, s.t3)
    if s.w1 > s.w2:
        s = s.swapped()
    w1, w2 = s.w1, s.w2
    if collapse_case(s) == "B":
        k3 = s.s2 if s.sigma == 1 else s.s2 - 1
        out = CylCoords11(s.sigma, w1, w2 - w1, s.s1 + s.s2, s.s2, k3,
                          s.t1, (w1 - s.t3) % (w2 - w1), (s.t2 + 2 * s.t3 - w1) % w2)
        return out.canonical()
    W = w1 + w2
    low = s.t3 <= w1 if s.sigma == 1 else s.t3 < w1
    shift = 2 * (s.t3 if low else s.t3 - W)
    out = CylCoords11(-s.sigma, w1, w2, s.s1, s.s2, 0 if s.sigma == 1 else 1,
                      (s.t1 + shift) % w1, (s.t2 + shift) % w2, (-s.t3) % W)
    return out.canonical()


# ---------------------------------------------------------------------------
# slit tori


def _mat_vec(m: Matrix, v: tuple[int, int]) -> tuple[int, int]:
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2))
                 for i in range(2))  # type: ignore[return-value]


def _det(m: Matrix) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _echelon(m: Matrix) -> Matrix:
    """Column echelon form ``[[a, 0], [b, g]]`` with a, g > 0 and 0 <= b < g."""
    cols = [(m[0][0], m[1][0]), (m[0][1], m[1][1])]
    (x1, y1), (x2, y2) = cols
    g, p, q = _egcd(x1, x2)
    if g == 0:
        raise Singular("matrix has a zero first row")
    first = (g, p * y1 + q * y2)
    second_y = (x1 // g) * y2 - (x2 // g) * y1
    if second_y == 0:
        raise Singular("determinant is zero")
    second_y = abs(second_y)
    return ((g, 0), (first[1] % second_y, second_y))


@dataclass(frozen=True)
class SlitTorusState:
    """A torus ``R^2 / L`` with two crossed slits whose starts differ by ``u``.

    ``L`` is stored in column echelon form (columns are the basis) and
    ``u`` is reduced mod ``L``.  Swapping the slits replaces ``u`` by
    ``-u``; the smaller representative is kept.
    """

    L: Matrix
    u: tuple[int, int]

    @classmethod
    def make(cls, L: Matrix, u: tuple[int, int]) -> "SlitTorusState":
        E = _echelon(L)
        return cls(E, min(_reduce(E, u), _reduce(E, (-u[0], -u[1]))))

    @property
    def d(self) -> int:
        return abs(_det(self.L))

    def generates(self) -> bool:
        """True when the columns of L together with u span Z^2."""
        vecs = [(self.L[0][0], self.L[1][0]), (self.L[0][1], self.L[1][1]), self.u]
        g1 = 0
        for x, y in vecs:
            g1 = gcd(gcd(g1, x), y)
        g2 = 0
        for i in range(3):
            for j in range(i + 1, 3):
                g2 = gcd(g2, vecs[i][0] * vecs[j][1] - vecs[i][1] * vecs[j][0])
        return g1 == 1 and g2 == 1


def _reduce(E: Matrix, u: tuple[int, int]) -> tuple[int, int]:
    (a, _), (b, g) = E
    q = u[0] // a
    return (u[0] - q * a, (u[1] - q * b) % g)


def canonical_slit_torus(d: int) -> SlitTorusState:
    """The standard pair ``L = Z x dZ``, ``u = (0, 1)``."""
    return SlitTorusState.make(((1, 0), (0, d)), (0, 1))


def to_slit_torus(s: ThreeCylState) -> SlitTorusState:
    """Reglue the two short slits of an equal-width state into a torus."""
    if s.w1 != s.w2:
        raise PreconditionFailed(f"narrow widths differ: {s.w1} != {s.w2}")
    try:
        (v1, v2), u = cut_slits(from_state(s))
    except OrigamiError as exc:
        raise PreconditionFailed(f"twists not prepared: {exc}") from exc
    L = ((v1[0], v2[0]), (v1[1], v2[1]))
    return SlitTorusState.make(L, u)


def from_slit_torus_state(t: SlitTorusState) -> ThreeCylState:
    """Three-cylinder coordinates of a slit torus."""
    basis = ((t.L[0][0], t.L[1][0]), (t.L[0][1], t.L[1][1]))
    return to_state(from_slit_torus(basis, t.u))


def canonical_state(d: int) -> ThreeCylState:
    """Three-cylinder coordinates of the standard slit torus of degree d."""
    return from_slit_torus_state(canonical_slit_torus(d))


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    """``P @ M @ Q = diag(d1, d2)`` with ``P``, ``Q`` unimodular."""

    d1: int
    d2: int
    P: Matrix
    Q: Matrix


def smith_normal_form(M: Matrix) -> SmithForm:
    """Elementary divisors of a nonsingular 2x2 integer matrix."""
    if _det(M) == 0:
        raise Singular("determinant is zero")
    A = [list(M[0]), list(M[1])]
    P = [[1, 0], [0, 1]]
    Q = [[1, 0], [0, 1]]

    def row_op(i: int, j: int, c: int) -> None:  # row i += c * row j
        for m in (A, P):
            m[i] = [m[i][k] + c * m[j][k] for k in range(2)]

    def col_op(i: int, j: int, c: int) -> None:  # col i += c * col j
        for m in (A, Q):
            for r in range(2):
                m[r][i] += c * m[r][j]

    def swap_rows() -> None:
        for m in (A, P):
            m[0], m[1] = m[1], m[0]

    def swap_cols() -> None:
        for m in (A, Q):
            for r in range(2):
                m[r][0], m[r][1] = m[r][1], m[r][0]

    while True:
        # Euclid down the first column, then along the first row
        while A[1][0]:
            if A[0][0] == 0 or abs(A[1][0]) < abs(A[0][0]):
                swap_rows()
                continue
            row_op(1, 0, -(A[1][0] // A[0][0]))
        while A[0][1]:
            if A[0][0] == 0 or abs(A[0][1]) < abs(A[0][0]):
                swap_cols()
                continue
            col_op(1, 0, -(A[0][1] // A[0][0]))
        if A[1][0] == 0 and A[1][1] % A[0][0] == 0:
            break
        # pull the other diagonal entry into the first row and repeat
        row_op(0, 1, 1)
    for i, m_sign in ((0, A[0][0]), (1, A[1][1])):
        if m_sign < 0:
            for k in range(2):
                A[i][k] = -A[i][k]
                P[i][k] = -P[i][k]
    as_t = lambda m: ((m[0][0], m[0][1]), (m[1][0], m[1][1]))  # noqa: E731
    return SmithForm(A[0][0], A[1][1], as_t(P), as_t(Q))


# ---------------------------------------------------------------------------
# normalization


@dataclass(frozen=True)
class Move:
    """One step of a normalization trace."""

    kind: str  # "F_h", "F_v", "slit", "smith", "shear"
    state: Union[ThreeCylState, SlitTorusState]


@dataclass
class NormalizationTrace:
    start: ThreeCylState
    moves: list[Move] = field(default_factory=list)
    d1: int = 1
    u2: int = 1

    @property
    def final(self) -> Union[ThreeCylState, SlitTorusState]:
        return self.moves[-1].state if self.moves else self.start

    def count(self, kind: str) -> int:
        return sum(m.kind == kind for m in self.moves)


def normalize_to_canonical(s: ThreeCylState) -> NormalizationTrace:
    """Drive a primitive state to the standard slit torus.

    Widths are reduced by horizontal moves into the collapse window
    followed by vertical moves until case B fires.  With equal widths the
    slits are cut, the lattice is brought to ``Z x dZ`` by its Smith form,
    and a shear fixing that lattice sends the offset to ``(0, 1)``.
    """
    if not is_primitive(s):
        raise NotPrimitive(f"{s} is not primitive")
    d = s.d
    trace = NormalizationTrace(s.canonical())
    if trace.start == canonical_state(d):
        return trace
    budget = 10 * d**3
    state = trace.start

    def step(kind: str, new: ThreeCylState) -> ThreeCylState:
        trace.moves.append(Move(kind, new))
        if len(trace.moves) > budget:
            raise NonTermination(f"no normal form after {budget} moves from {trace.start}")
        return new

    while state.w1 != state.w2:
        width = state.w1 + state.w2
        while collapse_case(state) != "B":
            state = step("F_h", move_horizontal(state))
        while True:
            due = collapse_due(state)
            state = step("F_v", move_vertical(state))
            if due:
                break
        if state.w1 + state.w2 >= width:
            raise NonTermination(f"collapse did not reduce widths at {state}")

    # the slits cross the wide cylinder only when it is thin: sigma = -1, k3 = 0
    while not (state.sigma == -1 and state.k3 == 0):
        state = step("F_v", move_vertical(state))
    slit = None
    for _ in range(state.w1 + state.w2):
        try:
            slit = to_slit_torus(state)
            break
        except PreconditionFailed:
            state = step("F_h", move_horizontal(state))
    if slit is None:
        raise NonTermination(f"could not cut slits at {state}")
    trace.moves.append(Move("slit", slit))

    snf = smith_normal_form(slit.L)
    trace.d1 = snf.d1
    if snf.d1 != 1 or snf.d2 != d:
        raise NotPrimitive(f"lattice has elementary divisors ({snf.d1}, {snf.d2})")
    g = snf.P
    if _det(g) < 0:
        g = _mat_mul(((1, 0), (0, -1)), g)
    u = _mat_vec(g, slit.u)
    std = SlitTorusState.make(_mat_mul(g, slit.L), u)
    trace.moves.append(Move("smith", std))
    u2 = u[1] % d
    trace.u2 = u2
    if gcd(u2, d) != 1:
        raise NotPrimitive(f"offset {u} does not generate Z^2 with Z x {d}Z")
    k = pow(u2, -1, d) if d > 1 else 1
    _, a, minus_t = _egcd(k, d)
    shear = ((a, -minus_t), (d, k))
    final = SlitTorusState.make(_mat_mul(shear, std.L), _mat_vec(shear, u))
    trace.moves.append(Move("shear", final))
    if final != canonical_slit_torus(d):
        raise NonTermination(f"shear ended at {final}")
    return trace
