"""Exact model of the slit-torus surface S(p/q, alpha) and its censuses.

The surface is the torus ``R^2 / (2Z x 2Z)`` with two vertical slits
``x = a`` and ``x = a' = 2 - a`` (``a = p/q``) over ``-alpha < y < alpha``,
glued crosswise: crossing slit ``a`` emerges at slit ``a'`` and vice
versa.  The upper endpoints form one simple zero ``z_top``, the lower
endpoints another, ``z_bot``.

Cutting along the lines ``x = a + 2j/q`` splits the surface into ``q``
vertical strips ("sheets") of width ``2/q``; sheet ``j`` lies between line
``j`` and line ``j + 1``.  Lines ``0`` and ``q - p`` carry the slits.  The
strips map isometrically onto the base torus spanned by ``(2/q, 0)`` and
``(0, 2)``, so every trajectory is a word in sheet transitions.

All geometry is exact: ``alpha`` is a quadratic surd and every decision
reduces to a sign test in ``Q(sqrt N)``.  The census kernels go one step
further and compare only integers against precomputed ``floor(k*alpha)``.

Counting conventions (pinned against the q = 2 and q = 3 constants):

* a saddle connection from ``z_top`` to ``z_bot`` is counted once, and a
  parallel pair of them counts once as a multiplicity-two item;
* a cylinder is counted once per orientation of its core curve and once
  per multiple of its primitive period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .counting import sv_constant

__all__ = [
    "CensusResult",
    "DegenerateStart",
    "EndsAtRegularPoint",
    "FieldScalar",
    "FitResult",
    "HitsZeroMidway",
    "LandsOnZero",
    "OutOfRange",
    "RationalAlpha",
    "Ray",
    "SeparatrixOverrun",
    "SlitTorusSurface",
    "build_surface",
    "census",
    "cylinder_census",
    "cylinder_pieces",
    "direction_cylinders",
    "direction_loops",
    "quadratic_fit",
    "saddle_census",
    "saddle_multiplicity",
    "trace_ray",
]

Rational = Union[int, Fraction]


class RationalAlpha(ValueError):
    """The slit half-length is rational; the asymptotics need it irrational."""


class OutOfRange(ValueError):
    """Surface parameters outside 0 < p/q < 1, 0 < alpha < 1."""


class DegenerateStart(ValueError):
    """A vertical ray starting at a regular point on a slit line."""


class SeparatrixOverrun(RuntimeError):
    """A separatrix in a periodic direction failed to close."""


# ---------------------------------------------------------------------------
# Q(sqrt N)


class FieldScalar:
    """Exact number ``r + s*sqrt(N)`` with rational r, s."""

    __slots__ = ("r", "s", "N")

    def __init__(self, r: Rational = 0, s: Rational = 0, N: int = 2) -> None:
        self.r = Fraction(r)
        self.s = Fraction(s)
        self.N = N

    def _coerce(self, other) -> "FieldScalar":
        if isinstance(other, FieldScalar):
            if other.N != self.N and other.s and self.s:
                raise ValueError("mixing different quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldScalar(other, 0, self.N)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldScalar(self.r + o.r, self.s + o.s, self.N if self.s else o.N)

    __radd__ = __add__

    def __neg__(self) -> "FieldScalar":
        return FieldScalar(-self.r, -self.s, self.N)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        N = self.N if self.s else o.N
        return FieldScalar(self.r * o.r + self.s * o.s * N, self.r * o.s + self.s * o.r, N)

    __rmul__ = __mul__

    def conjugate(self) -> "FieldScalar":
        return FieldScalar(self.r, -self.s, self.N)

    def norm(self) -> Fraction:
        return self.r * self.r - self.s * self.s * self.N

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.s:
            if not o.r:
                raise ZeroDivisionError("division by zero")
            return FieldScalar(self.r / o.r, self.s / o.r, self.N)
        n = o.norm()
        return self * o.conjugate() * FieldScalar(1 / n, 0, o.N)

    def __rtruediv__(self, other):
        return FieldScalar(other, 0, self.N) / self

    def sign(self) -> int:
        r, s = self.r, self.s
        if not s:
            return (r > 0) - (r < 0)
        if not r:
            return 1 if s > 0 else -1
        if (r > 0) == (s > 0):
            return 1 if r > 0 else -1
        # opposite signs: the larger square wins
        big_r = r * r > s * s * self.N
        return (1 if r > 0 else -1) if big_r else (1 if s > 0 else -1)

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.r == o.r and self.s == o.s

    def __hash__(self) -> int:
        return hash((self.r, self.s))

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __float__(self) -> float:
        return float(self.r) + float(self.s) * math.sqrt(self.N)

    def floor(self) -> int:
        f = math.floor(float(self))
        while self < f:
            f -= 1
        while self >= f + 1:
            f += 1
        return f

    def mod(self, m: Rational) -> "FieldScalar":
        """Representative in ``[0, m)``."""
        return self - m * (self / m).floor()

    def is_rational(self) -> bool:
        return not self.s

    def __repr__(self) -> str:
        return f"FieldScalar({self.r}, {self.s}, N={self.N})"


Vector = tuple[FieldScalar, FieldScalar]


# ---------------------------------------------------------------------------
# surface


@dataclass(frozen=True)
class SlitTorusSurface:
    """The slit torus S(p/q, alpha) of area 4."""

    p: int
    q: int
    alpha: FieldScalar
    alpha_spec: tuple[int, int, int, int]

    @property
    def a(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def a2(self) -> Fraction:
        return 2 - Fraction(self.p, self.q)

    @property
    def area(self) -> int:
        return 4

    @property
    def slit_lines(self) -> tuple[int, int]:
        """Sheet-line indices carrying the slits ``a`` and ``a'``."""
        return (0, self.q - self.p)

    def zero_points(self, zero: str) -> tuple[tuple[Fraction, FieldScalar], ...]:
        h = self.alpha if zero == "top" else -self.alpha
        return ((self.a, h), (self.a2, h))

    def floors(self, kmax: int) -> list[int]:
        """``floor(k*alpha)`` for ``0 <= k <= kmax``."""
        return _alpha_floors(self.alpha_spec, kmax)

    def rays_from(self, zero: str, direction: Vector) -> tuple["Ray", "Ray"]:
        """The two outgoing rays of a zero in a planar direction."""
        dx, dy = direction
        if dx.sign() == 0:
            down = dy.sign() < 0
            along_slit = down if zero == "top" else not down
            if along_slit:
                return (Ray(zero, 0, direction, "right"), Ray(zero, 0, direction, "left"))
        return (Ray(zero, 0, direction), Ray(zero, 1, direction))


_FLOOR_CACHE: dict[tuple[int, int, int, int], list[int]] = {}


def _alpha_floors(spec: tuple[int, int, int, int], kmax: int) -> list[int]:
    table = _FLOOR_CACHE.setdefault(spec, [0])
    if len(table) <= kmax:
        A, B, N, C = spec
        for k in range(len(table), kmax + 1):
            t = isqrt(k * k * B * B * N)  # floor(k|B|sqrt N); never exact
            num = k * A + t if B > 0 else k * A - t - 1
            table.append(num // C)
    return table


def build_surface(p: int, q: int, alpha_spec: Sequence[int] = (-1, 1, 2, 1)) -> SlitTorusSurface:
    """Surface for slit position p/q and slit half-length (A + B sqrt N)/C."""
    A, B, N, C = (int(x) for x in alpha_spec)
    if not (0 < p < q) or gcd(p, q) != 1:
        raise OutOfRange(f"need 0 < p < q with gcd 1, got p={p}, q={q}")
    if C == 0:
        raise OutOfRange("denominator C must be nonzero")
    if C < 0:
        A, B, C = -A, -B, -C
    if B == 0 or N < 2 or isqrt(N) ** 2 == N:
        raise RationalAlpha(f"alpha = ({A} + {B}*sqrt({N}))/{C} is rational")
    alpha = FieldScalar(Fraction(A, C), Fraction(B, C), N)
    if not (0 < alpha < 1):
        raise OutOfRange(f"alpha = {float(alpha):.6g} is not in (0, 1)")
    return SlitTorusSurface(p, q, alpha, (A, B, N, C))


# ---------------------------------------------------------------------------
# exact ray tracing


@dataclass(frozen=True)
class Ray:
    """An outgoing ray of a zero.

    ``rep`` picks the slit endpoint (0 for ``a``, 1 for ``a'``) the ray
    leaves from.  Vertical rays running along a slit are told apart by
    the slit side instead.
    """

    zero: str
    rep: int
    direction: Vector
    side: Optional[str] = None


@dataclass(frozen=True)
class LandsOnZero:
    zero: str


@dataclass(frozen=True)
class HitsZeroMidway:
    zero: str
    t: FieldScalar  # fraction of the holonomy travelled
    position: tuple[FieldScalar, FieldScalar]


@dataclass(frozen=True)
class EndsAtRegularPoint:
    position: tuple[FieldScalar, FieldScalar]


Outcome = Union[LandsOnZero, HitsZeroMidway, EndsAtRegularPoint]


def _fs(x, N: int) -> FieldScalar:
    return x if isinstance(x, FieldScalar) else FieldScalar(x, 0, N)


def _zero_at(surf: SlitTorusSurface, y: FieldScalar) -> Optional[str]:
    y = y.mod(2)
    if y == surf.alpha:
        return "top"
    if y == 2 - surf.alpha:
        return "bot"
    return None


def _in_band(surf: SlitTorusSurface, y: FieldScalar) -> bool:
    y = y.mod(2)
    return y < surf.alpha or y > 2 - surf.alpha


def trace_ray(surf: SlitTorusSurface, ray: Union[Ray, tuple], holonomy: Sequence) -> Outcome:
    """Develop the straight segment of the given holonomy along a ray.

    ``ray`` is either a :class:`Ray` from a zero or a regular start point
    ``(x, y)``.  Crossing a slit line inside the slit teleports to the
    other slit; passing through a slit endpoint before the end is a hit.
    """
    N = surf.alpha.N
    vx, vy = (_fs(c, N) for c in holonomy)
    if vx.sign() == 0 and vy.sign() == 0:
        raise ValueError("holonomy must be nonzero")
    lines = (surf.a, surf.a2)
    if isinstance(ray, Ray):
        dx, dy = ray.direction
        if (dx * vy - dy * vx).sign() != 0 or (dx * vx + dy * vy).sign() <= 0:
            raise ValueError("holonomy is not along the ray")
        x0, y0 = surf.zero_points(ray.zero)[ray.rep]
        x0 = _fs(x0, N)
    else:
        x0, y0 = (_fs(c, N) for c in ray)
        x0, y0 = x0.mod(2), y0.mod(2)
        if _zero_at(surf, y0) and any(x0 == L for L in lines):
            raise DegenerateStart("use a Ray to start at a zero")
    if vx.sign() == 0:
        return _trace_vertical(surf, ray, x0, y0, vy)
    step = 1 if vx.sign() > 0 else -1
    X = x0
    t = FieldScalar(0, 0, N)
    while True:
        # next slit line strictly beyond X in the direction of travel
        best = None
        for L in lines:
            k = ((X - L) / 2).floor()
            cand = FieldScalar(L, 0, N) + 2 * k
            while (cand - X).sign() * step <= 0:
                cand = cand + 2 * step
            while (cand - 2 * step - X).sign() * step > 0:
                cand = cand - 2 * step
            if best is None or (cand - best).sign() * step < 0:
                best = cand
        tc = t + (best - X) / vx
        if tc > 1:
            end = (X + (1 - t) * vx).mod(2), (y0 + vy).mod(2)
            return EndsAtRegularPoint(end)
        yc = y0 + tc * vy
        z = _zero_at(surf, yc)
        on_slit = best.mod(2)
        if tc == 1:
            if z is not None:
                return LandsOnZero(z)
            return EndsAtRegularPoint((on_slit, yc.mod(2)))
        if z is not None:
            return HitsZeroMidway(z, tc, (on_slit, yc.mod(2)))
        if _in_band(surf, yc):
            X = FieldScalar(surf.a2 if on_slit == surf.a else surf.a, 0, N)
        else:
            X = on_slit
        t = tc


def _trace_vertical(surf, ray, x0, y0, vy) -> Outcome:
    N = surf.alpha.N
    on_line = any(x0 == L for L in (surf.a, surf.a2))
    if not isinstance(ray, Ray):
        if on_line:
            raise DegenerateStart("vertical ray from a regular point on a slit line")
        return EndsAtRegularPoint((x0, (y0 + vy).mod(2)))
    up = vy.sign() > 0
    other = "bot" if ray.zero == "top" else "top"
    # along the slit between the endpoints, or round the torus outside it
    along_slit = (ray.zero == "top") != up
    gap = 2 * surf.alpha if along_slit else 2 - 2 * surf.alpha
    dist = vy if up else -vy
    c = (dist - gap).sign()
    if c == 0:
        return LandsOnZero(other)
    if c > 0:
        y = (y0 + (gap if up else -gap)).mod(2)
        return HitsZeroMidway(other, gap / dist, (x0, y))
    return EndsAtRegularPoint((x0, (y0 + vy).mod(2)))


# ---------------------------------------------------------------------------
# integer kernels
#
# Candidate saddle holonomies from z_top to z_bot are v = (2m/q, 2n - 2alpha).
# Leaving a zero to the right, the k-th line crossing (0 < k < |m|) is at
# height alpha + k(2n - 2alpha)/|m|; with r = kn mod |m| it lies inside the
# slits iff r < k*alpha or |m| - r < (|m| - k)*alpha.  No interior crossing
# can meet a zero, and the endpoint is z_bot iff the last line is a slit line.


def _step_right(j: int, q: int, p: int, band: bool) -> int:
    line = (j + 1) % q
    if band:
        if line == 0:
            return q - p
        if line == q - p:
            return 0
    return line


def _step_left(j: int, q: int, p: int, band: bool) -> int:
    if band:
        if j == 0:
            return q - p - 1
        if j == q - p:
            return q - 1
    return (j - 1) % q


def saddle_multiplicity(surf: SlitTorusSurface, m: int, n: int) -> int:
    """Number of z_top rays along ``(2m/q, 2n - 2alpha)`` that land on z_bot."""
    q, p = surf.q, surf.p
    if m == 0:
        return 2 if n in (0, 1) else 0
    M = abs(m)
    F = surf.floors(M)
    slit = (0, q - p)
    k_hits = 0
    if m > 0:
        starts = (0, q - p)
    else:
        starts = (q - 1, q - p - 1)
    for j in starts:
        r = 0
        for k in range(1, M):
            r = (r + n) % M
            band = r <= F[k] or M - r <= F[M - k]
            j = _step_right(j, q, p, band) if m > 0 else _step_left(j, q, p, band)
        if m > 0:
            k_hits += (j + 1) % q in slit
        else:
            k_hits += j in slit
    return k_hits


def direction_loops(surf: SlitTorusSurface, m: int, n: int, zero: str = "top") -> tuple[int, int]:
    """Lengths, in periods of ``v0 = (2m/q, 2n)``, of the two separatrix loops.

    ``m > 0`` and ``gcd(m, n) = 1``.  Along ``v0`` the crossing heights are
    ``y0 + 2kn/m``: at ``k`` a multiple of ``m`` the ray is back at the
    zero's height, and elsewhere it lies in the slits iff
    ``m - (kn mod m) < m*alpha`` (top) or ``kn mod m < m*alpha`` (bottom).
    """
    if m <= 0 or gcd(m, n) != 1:
        raise ValueError("need m > 0 and gcd(m, n) = 1")
    q, p = surf.q, surf.p
    Fm = surf.floors(m)[m]
    slit = (0, q - p)
    bound = 8 * q
    out = []
    for j in (0, q - p):
        r = 0
        rounds = 0
        while True:
            for k in range(1, m):
                r = (r + n) % m
                band = (m - r <= Fm) if zero == "top" else (r <= Fm)
                j = _step_right(j, q, p, band)
            r = (r + n) % m
            rounds += 1
            line = (j + 1) % q
            if line in slit:
                out.append(rounds)
                break
            j = line
            if rounds > bound:
                raise SeparatrixOverrun(f"loop along ({m}, {n}) did not close")
    return (out[0], out[1])


def direction_cylinders(surf: SlitTorusSurface, m: int, n: int) -> tuple[int, ...]:
    """Cylinder circumferences, in periods of the primitive ``(2m/q, 2n)``."""
    if m == 0:
        return (1, 1)
    if m < 0:
        m, n = -m, -n
    a1, a2 = direction_loops(surf, m, n, "top")
    b1, b2 = direction_loops(surf, m, n, "bot")
    if sorted((a1, a2)) != sorted((b1, b2)):
        raise SeparatrixOverrun(f"top and bottom loops disagree along ({m}, {n})")
    return tuple(sorted((a1, a2))) + (a1 + a2,)


def cylinder_pieces(surf: SlitTorusSurface, m: int, n: int) -> list[int]:
    """Cylinder circumferences along ``(2m/q, 2n)`` from sheet monodromy.

    Independent of :func:`direction_loops`.  Leaves of the base torus in
    this direction are labelled by their height ``y`` on the mid-strip
    line ``x = a + 1/q`` modulo ``2/m``; the leaves through the two zeros
    are the only critical labels, and ``y = 0`` and ``y = 1/m`` sit in the
    two complementary intervals.  Each lift of a regular leaf is a cycle
    of the one-period sheet permutation; lifts on either side of a
    critical leaf are joined when the lift of the critical leaf through
    that sheet is a regular closed curve.
    """
    if m <= 0 or gcd(m, n) != 1:
        raise ValueError("need m > 0 and gcd(m, n) = 1")
    q, p = surf.q, surf.p
    Fm = surf.floors(m)[m]
    slit = (0, q - p)

    def band(J: int) -> bool:
        J %= 2 * m
        return J <= Fm or 2 * m - J <= Fm

    def round_trip(j: int, y_num: int) -> int:
        # heights (in units of 1/m) at the m crossings of one period
        for k in range(m):
            j = _step_right(j, q, p, band(y_num + (2 * k + 1) * n))
        return j

    labels = (0, 1, 2)  # y = 0, 1/m, 2/m
    perms = {y: [round_trip(j, y) for j in range(q)] for y in labels}

    def critical_between(y_lo: int) -> tuple[str, int]:
        # the crossing index k at which some height equals +-alpha
        for zero, sgn in (("top", 1), ("bot", -1)):
            for k in range(m):
                lo = y_lo + (2 * k + 1) * n
                # is +-alpha strictly between lo/m and (lo+1)/m modulo 2?
                target = (sgn * Fm) if sgn > 0 else (-Fm - 1)
                if (lo - target) % (2 * m) == 0:
                    return zero, k
        raise AssertionError("no critical leaf between adjacent labels")

    def next_at_critical(j: int, y_lo: int, k_star: int) -> Optional[int]:
        # one period along the critical leaf; None if it meets the zero
        for k in range(m):
            if k == k_star:
                line = (j + 1) % q
                if line in slit:
                    return None
                j = line
            else:
                j = _step_right(j, q, p, band(y_lo + (2 * k + 1) * n))
        return j

    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y) -> None:
        parent[find(x)] = find(y)

    for y in labels:
        for j in range(q):
            union((y, j), (y, perms[y][j]))
    for y_lo in (0, 1):
        _, k_star = critical_between(y_lo)
        nxt = [next_at_critical(j, y_lo, k_star) for j in range(q)]
        for j in range(q):
            seen = []
            i = j
            while i is not None and i not in seen:
                seen.append(i)
                i = nxt[i]
            if i is not None:
                union((y_lo, j), (y_lo + 1, j))
    # label 2/m is label 0 seen at another point of the same leaves
    steps = (-pow(n, -1, m)) % m if m > 1 else 0
    for j in range(q):
        i = j
        for k in range(steps):
            # from the mid-strip, each crossing then the next mid-strip
            i = _step_right(i, q, p, band(2 + (2 * k + 1) * n))
        union((2, j), (0, i))
    comps: dict = {}
    for y in (0, 1):
        for j in range(q):
            comps.setdefault(find((y, j)), set()).add((y, j))
    out = []
    for members in comps.values():
        y = min(members)[0]
        sheets = sorted(j for yy, j in members if yy == y)
        start = sheets[0]
        length, i = 1, perms[y][start]
        while i != start:
            i = perms[y][i]
            length += 1
        out.append(length)
    return sorted(out)


# ---------------------------------------------------------------------------
# censuses


@dataclass
class CensusResult:
    """Counts on a grid of length bounds."""

    p: int
    q: int
    alpha_spec: tuple[int, int, int, int]
    T: list[Fraction]
    ns1: list[int] = field(default_factory=list)
    ns2: list[int] = field(default_factory=list)
    nc: list[int] = field(default_factory=list)
    histogram: dict[int, int] = field(default_factory=dict)
    cylinder_patterns: dict[int, int] = field(default_factory=dict)


def _grid(T) -> list[Fraction]:
    if isinstance(T, (int, float, Fraction)):
        T = [T]
    out = sorted(Fraction(t) for t in T)
    if not out or out[0] <= 0:
        raise ValueError("length bounds must be positive")
    return out


def _n_range(surf: SlitTorusSurface, m: int, T: Fraction) -> range:
    """All n with |(2m/q, 2n - 2alpha)| <= T."""
    R2 = T * T / 4 - Fraction(m * m, surf.q * surf.q)  # (n - alpha)^2 <= R2
    if R2 < 0:
        return range(0)
    al = surf.alpha

    def inside(n: int) -> bool:
        d = n - al
        return d * d <= R2

    r = math.sqrt(float(R2))
    lo = math.ceil(float(al) - r) - 1
    hi = math.floor(float(al) + r) + 1
    while inside(lo - 1) or (lo <= hi and not inside(lo)):
        lo = lo - 1 if inside(lo - 1) else lo + 1
    while inside(hi + 1) or (hi >= lo and not inside(hi)):
        hi = hi + 1 if inside(hi + 1) else hi - 1
    return range(lo, hi + 1)


def saddle_census(surf: SlitTorusSurface, T) -> CensusResult:
    """Saddle connections z_top -> z_bot of length <= T, by multiplicity."""
    grid = _grid(T)
    Tmax = grid[-1]
    mmax = math.floor(Tmax * surf.q / 2)
    ns1 = [0] * len(grid)
    ns2 = [0] * len(grid)
    hist = {0: 0, 1: 0, 2: 0}
    for m in range(-mmax, mmax + 1):
        ranges = [_n_range(surf, m, t) for t in grid]
        for n in ranges[-1]:
            k = saddle_multiplicity(surf, m, n)
            hist[k] += 1
            if k == 0:
                continue
            for i, rg in enumerate(ranges):
                if n in rg:
                    if k == 1:
                        ns1[i] += 1
                    else:
                        ns2[i] += 1
    res = CensusResult(surf.p, surf.q, surf.alpha_spec, grid, ns1, ns2)
    res.histogram = hist
    return res


def cylinder_census(surf: SlitTorusSurface, T) -> CensusResult:
    """Cylinders with core length <= T, both orientations, all multiples."""
    grid = _grid(T)
    Tmax = grid[-1]
    q = surf.q
    nc = [0] * len(grid)
    patterns: dict[int, int] = {}
    mmax = math.floor(Tmax * q / 2)
    for m in range(0, mmax + 1):
        for n in range(-math.floor(Tmax / 2) - 1, math.floor(Tmax / 2) + 2):
            if m == 0 and n != 1:
                continue
            if gcd(m, n) != 1:
                continue
            L2 = Fraction(4 * m * m, q * q) + 4 * n * n
            if L2 > Tmax * Tmax:
                continue
            cyl = direction_cylinders(surf, m, n)
            patterns[len(cyl)] = patterns.get(len(cyl), 0) + 1
            for i, t in enumerate(grid):
                for c in cyl:
                    # multiples k with k*c*|v0| <= t, times two orientations
                    nc[i] += 2 * isqrt(math.floor(t * t / (c * c * L2)))
    res = CensusResult(surf.p, surf.q, surf.alpha_spec, grid)
    res.nc = nc
    res.cylinder_patterns = patterns
    return res


def census(surf: SlitTorusSurface, T) -> CensusResult:
    """Saddle and cylinder counts on one grid."""
    s = saddle_census(surf, T)
    c = cylinder_census(surf, T)
    s.nc = c.nc
    s.cylinder_patterns = c.cylinder_patterns
    return s


# ---------------------------------------------------------------------------
# fits


@dataclass(frozen=True)
class FitResult:
    quantity: str
    coefficient: float  # N(T)/T^2 at the largest T
    slope: float  # least-squares slope of N against T^2
    theory: float  # (1/4)*pi*constant
    ratio: float  # coefficient / theory, nan when the theory value is 0


_QUANTITY_KIND = {"ns1": "s1", "ns2": "s2", "nc": "c"}


def quadratic_fit(result: CensusResult, theory: Optional[dict[str, Fraction]] = None) -> dict[str, FitResult]:
    """Quadratic growth coefficients and their ratios to the predicted constants."""
    if len(result.T) < 3:
        raise ValueError("need at least three length bounds")
    x = np.array([float(t) ** 2 for t in result.T])
    out = {}
    for name, kind in _QUANTITY_KIND.items():
        ys = getattr(result, name)
        if not ys:
            continue
        y = np.array(ys, dtype=float)
        coef = float(y[-1] / x[-1])
        slope = float(np.polyfit(x, y, 1)[0])
        const = theory[kind] if theory and kind in theory else sv_constant(kind, result.q)
        th = 0.25 * math.pi * float(const)
        ratio = coef / th if th else float("nan")
        out[name] = FitResult(name, coef, slope, th, ratio)
    return out
