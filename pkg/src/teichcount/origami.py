"""Square-tiled model of three-cylinder covers and exact point pushing.

A cover in the fiber over the marked torus is realized on an ``n x n``
grid of the base torus: the first zero sits at grid vertex (0, 0) and the
second at (1, 1), so the offset (delta1, delta2) is (1/n, 1/n).  Integer
cylinder data do not depend on n >= 2, because the diagonal path between
the zeros never crosses delta = 0.

The cover is a set of unit squares with right/up gluing permutations
``r`` and ``u``; every square remembers its position on the base grid.
Moving a zero across one grid edge changes the gluing across that edge
only, and the new gluing is forced: the cover over a disc with one branch
point is determined by its boundary monodromy.  Kernel-foliation moves
are ``n`` such pushes in a row.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cover_enum import CylCoords11, _hermite_2d, lattice_divisors

__all__ = [
    "Origami",
    "OrigamiError",
    "canonical_form",
    "cut_slits",
    "from_slit_torus",
    "from_state",
    "push",
    "to_state",
]

GRID = 2


class OrigamiError(ValueError):
    """The square tiling does not have the expected shape."""


@dataclass(frozen=True)
class Origami:
    """Unit squares glued by translations over an n x n grid torus.

    Square ``s`` has right neighbour ``r[s]``, upper neighbour ``u[s]`` and
    base grid position ``(bx[s], by[s])``.  ``zeros`` lists the grid
    vertices of the marked points, first zero first.
    """

    n: int
    r: tuple[int, ...]
    u: tuple[int, ...]
    bx: tuple[int, ...]
    by: tuple[int, ...]
    zeros: tuple[tuple[int, int], ...]

    @property
    def size(self) -> int:
        return len(self.r)

    def inverses(self) -> tuple[list[int], list[int]]:
        ri = [0] * self.size
        ui = [0] * self.size
        for s in range(self.size):
            ri[self.r[s]] = s
            ui[self.u[s]] = s
        return ri, ui

    def vertex_rotation(self) -> list[int]:
        """Counterclockwise turn around the bottom-left corner of each square.

        Starting in the square north-east of a vertex, step west, south,
        east and north.  Fixed points are squares whose corner is regular.
        """
        ri, ui = self.inverses()
        return [self.u[self.r[ui[ri[s]]]] for s in range(self.size)]

    def singular_squares(self) -> dict[tuple[int, int], list[list[int]]]:
        """Cycles of the vertex rotation of length > 1, keyed by base vertex."""
        rot = self.vertex_rotation()
        seen = set()
        out: dict[tuple[int, int], list[list[int]]] = {}
        for s in range(self.size):
            if s in seen or rot[s] == s:
                continue
            cyc = [s]
            seen.add(s)
            j = rot[s]
            while j != s:
                cyc.append(j)
                seen.add(j)
                j = rot[j]
            out.setdefault((self.bx[s], self.by[s]), []).append(cyc)
        return out

    def check(self) -> None:
        """Assert gluings respect base positions and zeros are simple."""
        n = self.n
        for s in range(self.size):
            if self.bx[self.r[s]] != (self.bx[s] + 1) % n or self.by[self.r[s]] != self.by[s]:
                raise OrigamiError("r does not cover the grid translation")
            if self.by[self.u[s]] != (self.by[s] + 1) % n or self.bx[self.u[s]] != self.bx[s]:
                raise OrigamiError("u does not cover the grid translation")
        sing = self.singular_squares()
        expected = {z: 1 for z in self.zeros}
        got = {z: len(c) for z, c in sing.items()}
        if got != expected or any(len(c[0]) != 2 for c in sing.values()):
            raise OrigamiError(f"unexpected singularities {got}, expected {expected}")

    def holonomy_divisors(self) -> tuple[int, int]:
        """Elementary divisors of the holonomy lattice in base-torus units."""
        pot = {0: (0, 0)}
        stack = [0]
        ri, ui = self.inverses()
        steps = ((self.r, (1, 0)), (self.u, (0, 1)), (ri, (-1, 0)), (ui, (0, -1)))
        while stack:
            s = stack.pop()
            for p, (x, y) in steps:
                t = p[s]
                if t not in pot:
                    pot[t] = (pot[s][0] + x, pot[s][1] + y)
                    stack.append(t)
        cycles = []
        for p, (x, y) in steps[:2]:
            for s in range(self.size):
                t = p[s]
                cycles.append((pot[s][0] + x - pot[t][0], pot[s][1] + y - pot[t][1]))
        d1, d2 = lattice_divisors(cycles)
        if d1 % self.n or d2 % self.n:
            raise OrigamiError("holonomy lattice is not a sublattice of the base lattice")
        return (d1 // self.n, d2 // self.n)


# ---------------------------------------------------------------------------
# state <-> squares


def from_state(state: CylCoords11, n: int = GRID) -> Origami:
    """Build the square tiling of a three-cylinder state."""
    if n < 2:
        raise ValueError("grid scale must be at least 2")
    sg = state.sigma
    widths = (n * state.w1, n * state.w2, n * (state.w1 + state.w2))
    rows = (
        n * (state.s1 - state.k3) + sg,
        n * (state.s2 - state.k3) + sg,
        n * state.k3 - sg,
    )
    if min(rows) < 1:
        raise OrigamiError("non-positive cylinder height")
    offset = [0, 0, 0]
    total = 0
    for c in range(3):
        offset[c] = total
        total += widths[c] * rows[c]

    def sq(c: int, row: int, col: int) -> int:
        return offset[c] + row * widths[c] + col % widths[c]

    r = [0] * total
    u = [-1] * total
    for c in range(3):
        for row in range(rows[c]):
            for col in range(widths[c]):
                r[sq(c, row, col)] = sq(c, row, col + 1)
                if row + 1 < rows[c]:
                    u[sq(c, row, col)] = sq(c, row + 1, col)
    m1 = n * state.t1 + sg
    m2 = n * state.t2 + sg
    m3 = n * state.t3 - sg
    W1, W2, W3 = widths
    top1, top2, top3 = rows[0] - 1, rows[1] - 1, rows[2] - 1
    # narrow tops into the bottom of C3: eta2 then eta1, starting at x
    for j in range(W2):
        u[sq(1, top2, m2 + j)] = sq(2, 0, j)
    for j in range(W1):
        u[sq(0, top1, m1 + j)] = sq(2, 0, W2 + j)
    # top of C3 into the narrow bottoms: gamma2 then gamma1, starting at x'
    for j in range(W2):
        u[sq(2, top3, m3 + j)] = sq(1, 0, j)
    for j in range(W1):
        u[sq(2, top3, m3 + W2 + j)] = sq(0, 0, j)
    if -1 in u or len(set(u)) != total:
        raise OrigamiError("vertical gluing is not a permutation")
    # base positions by propagation from the bottom-left square of C1
    start = (0, 0) if sg == 1 else (1 % n, 1 % n)
    bx = [-1] * total
    by = [-1] * total
    bx[0], by[0] = start
    stack = [0]
    ui = [0] * total
    ri = [0] * total
    for s in range(total):
        ui[u[s]] = s
        ri[r[s]] = s
    while stack:
        s = stack.pop()
        for t, dx, dy in ((r[s], 1, 0), (u[s], 0, 1), (ri[s], -1, 0), (ui[s], 0, -1)):
            px, py = (bx[s] + dx) % n, (by[s] + dy) % n
            if bx[t] == -1:
                bx[t], by[t] = px, py
                stack.append(t)
            elif (bx[t], by[t]) != (px, py):
                raise OrigamiError("inconsistent base positions")
    o = Origami(n, tuple(r), tuple(u), tuple(bx), tuple(by), ((0, 0), (1 % n, 1 % n)))
    o.check()
    return o


def _cylinders(o: Origami) -> list[dict]:
    """Horizontal cylinders: bottom row square list, row count, width."""
    rot = o.vertex_rotation()
    singular = {s for s in range(o.size) if rot[s] != s}
    row_of = {}
    rows = []
    for s in range(o.size):
        if s in row_of:
            continue
        row = [s]
        row_of[s] = len(rows)
        j = o.r[s]
        while j != s:
            row_of[j] = len(rows)
            row.append(j)
            j = o.r[j]
        rows.append(row)
    cyls = []
    for idx, row in enumerate(rows):
        if not any(s in singular for s in row):
            continue
        # climb while the top boundary carries no singular vertex
        height = 1
        top = row
        while not any(o.u[s] in singular for s in top):
            top = rows[row_of[o.u[top[0]]]]
            height += 1
            if height > o.size:
                raise OrigamiError("cylinder never closes")
        cyls.append({"bottom": row, "rows": height, "width": len(row), "top_row": top})
    return cyls


def _cylinder_columns(o: Origami, cyl: dict) -> tuple[list[int], list[int]]:
    """Bottom and top rows of a cylinder, top aligned above bottom."""
    bottom = cyl["bottom"]
    top = []
    for s in bottom:
        t = s
        for _ in range(cyl["rows"] - 1):
            t = o.u[t]
        top.append(t)
    return bottom, top


def to_state(o: Origami) -> CylCoords11:
    """Read canonical three-cylinder coordinates off a square tiling."""
    n = o.n
    rot = o.vertex_rotation()
    singular = {s for s in range(o.size) if rot[s] != s}
    z1 = {s for s in singular if (o.bx[s], o.by[s]) == o.zeros[0]}
    cyls = _cylinders(o)
    if len(cyls) != 3:
        raise OrigamiError(f"expected three horizontal cylinders, found {len(cyls)}")
    cyls.sort(key=lambda c: c["width"])
    if cyls[0]["width"] + cyls[1]["width"] != cyls[2]["width"]:
        raise OrigamiError("cylinder widths do not satisfy w3 = w1 + w2")
    narrow, wide = cyls[:2], cyls[2]
    bottoms = []
    for c in narrow:
        b, t = _cylinder_columns(o, c)
        zb = [i for i, s in enumerate(b) if s in singular]
        zt = [i for i, s in enumerate(t) if o.u[s] in singular]
        if len(zb) != 1 or len(zt) != 1:
            raise OrigamiError("narrow cylinder boundary is not a single saddle loop")
        # re-index so that column 0 carries the bottom zero
        b = b[zb[0]:] + b[: zb[0]]
        t = t[zb[0]:] + t[: zb[0]]
        c["b"], c["t"] = b, t
        c["m"] = (zt[0] - zb[0]) % c["width"]
        bottoms.append(b[0])
    sig = 1 if bottoms[0] in z1 else -1
    if (bottoms[1] in z1) != (sig == 1):
        raise OrigamiError("narrow cylinders start at different zeros")
    for c in narrow:
        c["set_b"] = set(c["b"])
        c["set_t"] = set(c["t"])
    wb, wt = _cylinder_columns(o, wide)
    W3 = wide["width"]
    ri, ui = o.inverses()
    candidates = []
    for first, second in ((0, 1), (1, 0)):
        c1, c2 = narrow[first], narrow[second]
        # x: square of C3's bottom row whose left neighbour sits above C1, itself above C2
        xs = [i for i, s in enumerate(wb)
              if ui[s] in c2["set_t"] and ui[wb[(i - 1) % W3]] in c1["set_t"]]
        xps = [i for i, s in enumerate(wt)
               if o.u[s] in c2["set_b"] and o.u[wt[(i - 1) % W3]] in c1["set_b"]]
        if len(xs) != 1 or len(xps) != 1:
            raise OrigamiError("could not locate the distinguished zeros of C3")
        m3 = (xps[0] - xs[0]) % W3
        rows3 = wide["rows"]
        vals = []
        for num, den in (((c1["m"] - sig), n), ((c2["m"] - sig), n), ((m3 + sig), n),
                         ((rows3 + sig), n), ((c1["rows"] + rows3), n), ((c2["rows"] + rows3), n)):
            if num % den:
                raise OrigamiError("cylinder data not on the integer lattice")
            vals.append(num // den)
        t1, t2, t3, k3, s1, s2 = vals
        w1, w2 = c1["width"] // n, c2["width"] // n
        candidates.append(CylCoords11(sig, w1, w2, s1, s2, k3,
                                      t1 % w1, t2 % w2, t3 % (w1 + w2)))
    return min(c.canonical() for c in candidates)


# ---------------------------------------------------------------------------
# pushes


def push(o: Origami, which: int, direction: str) -> Origami:
    """Move zero ``which`` one grid edge in ``direction`` (E, W, N, S)."""
    n = o.n
    a, b = o.zeros[which]
    r = list(o.r)
    u = list(o.u)
    ri, ui = o.inverses()

    def at(x: int, y: int) -> list[int]:
        return [s for s in range(o.size) if o.bx[s] == x % n and o.by[s] == y % n]

    if direction == "E":
        # rotation around v seen from its NE squares; undo it across the edge below
        inv = _invert_on(lambda x: o.u[o.r[ui[ri[x]]]], at(a, b))
        for s in at(a, b - 1):
            u[s] = inv[o.u[s]]
        new = ((a + 1) % n, b)
    elif direction == "W":
        mu = {x: ri[o.u[o.r[ui[x]]]] for x in at(a - 1, b)}
        for s in at(a - 1, b - 1):
            u[s] = mu[o.u[s]]
        new = ((a - 1) % n, b)
    elif direction == "N":
        c = {x: o.u[o.r[ui[ri[x]]]] for x in at(a, b)}
        for s in at(a - 1, b):
            r[s] = c[o.r[s]]
        new = (a, (b + 1) % n)
    elif direction == "S":
        mu = {x: o.r[ui[ri[o.u[x]]]] for x in at(a, b - 1)}
        inv = {v: k for k, v in mu.items()}
        for s in at(a - 1, b - 1):
            r[s] = inv[o.r[s]]
        new = (a, (b - 1) % n)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    zeros = list(o.zeros)
    zeros[which] = new
    out = Origami(n, tuple(r), tuple(u), o.bx, o.by, tuple(zeros))
    out.check()
    return out


def _invert_on(f, domain: list[int]) -> dict[int, int]:
    return {f(x): x for x in domain}


def canonical_form(o: Origami) -> tuple:
    """Relabeling-invariant form: BFS labels from each square over the first zero's cell."""
    best = None
    for root in range(o.size):
        if (o.bx[root], o.by[root]) != (0, 0):
            continue
        label = {root: 0}
        order = [root]
        for s in order:
            for t in (o.r[s], o.u[s]):
                if t not in label:
                    label[t] = len(order)
                    order.append(t)
        if len(order) != o.size:
            raise OrigamiError("square tiling is not connected")
        form = (tuple(label[o.r[s]] for s in order), tuple(label[o.u[s]] for s in order),
                tuple((o.bx[s], o.by[s]) for s in order))
        if best is None or form < best:
            best = form
    return (o.n, o.zeros, best)


# ---------------------------------------------------------------------------
# slit tori
#
# A slit is the grid path (0, 0) -> (1, 0) -> (1, 1) from the first zero to
# the second: the lower edge and then the right edge of a square sitting
# north-east of the first zero.  Exchanging the two sides of two such slits
# turns a torus into a genus-two surface and back.


def _swap_slit_sides(r: list[int], u: list[int], a1: int, a2: int) -> None:
    ui = {t: s for s, t in enumerate(u)}
    b1, b2 = ui[a1], ui[a2]
    u[b1], u[b2] = a2, a1
    r[a1], r[a2] = r[a2], r[a1]


def _lattice_basis(vectors) -> tuple[tuple[int, int], tuple[int, int]]:
    basis = _hermite_2d([tuple(v) for v in vectors])
    if len(basis) != 2:
        raise OrigamiError("period lattice is degenerate")
    (a, b), (_, g) = basis
    if a < 0:
        a, b = -a, -b
    return (a, b % g), (0, abs(g))


def cut_slits(o: Origami) -> tuple[tuple[tuple[int, int], tuple[int, int]], tuple[int, int]]:
    """Cut the two slits at the first zero and reglue them into a torus.

    Returns the period lattice (echelon basis ``(a, b), (0, g)``) and the
    offset from the first slit to the second, both in base-torus units.
    Raises :class:`OrigamiError` when a slit misses the second zero or the
    result is not a single torus.
    """
    n = o.n
    sing = o.singular_squares()
    starts = sing.get(o.zeros[0])
    if not starts or o.zeros != ((0, 0), (1 % n, 1 % n)):
        raise OrigamiError("zeros are not in slit position")
    a1, a2 = starts[0]
    ri, ui = o.inverses()
    for a in (a1, a2):
        corner = ui[ri[o.u[o.r[a]]]]
        if corner == a:
            raise OrigamiError("slit does not end at the second zero")
    r, u = list(o.r), list(o.u)
    _swap_slit_sides(r, u, a1, a2)
    torus = Origami(n, tuple(r), tuple(u), o.bx, o.by, ())
    if any(torus.vertex_rotation()[s] != s for s in range(o.size)):
        raise OrigamiError("regluing left a cone point")
    ri, ui = torus.inverses()
    pos = {a1: (0, 0)}
    stack = [a1]
    steps = ((torus.r, (1, 0)), (torus.u, (0, 1)), (ri, (-1, 0)), (ui, (0, -1)))
    while stack:
        s = stack.pop()
        for p, (x, y) in steps:
            t = p[s]
            if t not in pos:
                pos[t] = (pos[s][0] + x, pos[s][1] + y)
                stack.append(t)
    if len(pos) != o.size:
        raise OrigamiError("regluing disconnected the surface")
    periods = []
    for p, (x, y) in steps[:2]:
        for s in range(o.size):
            t = p[s]
            periods.append((pos[s][0] + x - pos[t][0], pos[s][1] + y - pos[t][1]))
    v1, v2 = _lattice_basis(periods)
    if any(c % n for c in v1 + v2) or any(c % n for c in pos[a2]):
        raise OrigamiError("slit torus is not a cover of the base grid")
    basis = ((v1[0] // n, v1[1] // n), (v2[0] // n, v2[1] // n))
    return basis, (pos[a2][0] // n, pos[a2][1] // n)


def from_slit_torus(basis, offset, n: int = GRID) -> Origami:
    """Square tiling of the torus ``R^2 / L`` with two slits crossed.

    ``basis`` spans ``L`` inside ``Z^2`` and ``offset`` is the integer
    vector from the first slit to the second.
    """
    (a, b), (_, g) = _lattice_basis([(n * x, n * y) for x, y in basis])
    size = a * g

    def index(x: int, y: int) -> int:
        q = x // a
        return (x - q * a) * g + (y - q * b) % g

    r = [0] * size
    u = [0] * size
    bx = [0] * size
    by = [0] * size
    for x in range(a):
        for y in range(g):
            s = index(x, y)
            r[s] = index(x + 1, y)
            u[s] = index(x, y + 1)
            bx[s], by[s] = x % n, y % n
    a1 = index(0, 0)
    a2 = index(n * offset[0], n * offset[1])
    if a1 == a2:
        raise OrigamiError("slits coincide")
    _swap_slit_sides(r, u, a1, a2)
    o = Origami(n, tuple(r), tuple(u), tuple(bx), tuple(by), ((0, 0), (1 % n, 1 % n)))
    o.check()
    return o
