"""Edge tessellations generated by the four obtuse polygons.

A tessellation is built from nothing but its fundamental polygon: the
reflections in the polygon's edges generate a crystallographic group ``G``;
Schreier generators give its translation lattice ``L``; every tile is
``t(g_M(P))`` for a lattice vector ``t`` and one representative ``g_M`` per
linear part ``M``.  Reducing the edges of those finitely many representative
tiles modulo ``L`` gives, for each incline class, a periodic pattern of edge
intervals along a periodic family of lines.  Crossing and vertex queries are
then constant-time rational arithmetic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Iterator, Optional

from gmpy2 import mpq

from .geometry import (
    ONE,
    ZERO,
    AffineMap,
    InclineClass,
    InclineLine,
    ScaledPoint,
    floor,
    rat,
)


class ShapeId(Enum):
    TRIANGLE120 = "triangle"
    RHOMBUS60 = "rhombus"
    KITE = "kite"
    HEXAGON = "hexagon"

    @classmethod
    def parse(cls, name: str) -> "ShapeId":
        name = name.lower()
        for s in cls:
            if name in (s.value, s.name.lower()):
                return s
        raise ValueError(f"unknown shape {name!r}")


def _pts(*coords):
    return tuple(ScaledPoint.of(x, y) for x, y in coords)


# Counter-clockwise vertex lists.  The triangle has A=(-1,0), C=(1,0) and apex
# B=(0,1/3); the rhombus is ABC together with its mirror image in AC; the kite
# is AOBD with O the midpoint of AC and D the mirror image of O in AB; the
# hexagon is centred at the 12-valent vertex (0,1) with vertical sides on
# x = +-2, so its sides are unions of triangle-tessellation edges (24 copies
# of ABC subdivide it) and A, C lie on its two lower sides.
FUNDAMENTAL = {
    ShapeId.TRIANGLE120: _pts((-1, 0), (1, 0), (0, "1/3")),
    ShapeId.RHOMBUS60: _pts((-1, 0), (0, "-1/3"), (1, 0), (0, "1/3")),
    ShapeId.KITE: _pts((-1, 0), (0, 0), (0, "1/3"), ("-1/2", "1/2")),
    ShapeId.HEXAGON: _pts((0, "-1/3"), (2, "1/3"), (2, "5/3"), (0, "7/3"), (-2, "5/3"), (-2, "1/3")),
}

EDGES_PER_STRIP = {ShapeId.TRIANGLE120: 4, ShapeId.RHOMBUS60: 2, ShapeId.KITE: 3}


@dataclass(frozen=True)
class Barrier:
    """Sub-interval of the fence [0, 2) whose contacts are vertical-edge cuts.

    ``(1/3, 5/3]`` by default; ``gate_swapped`` turns it into the complement
    ``[0, 1/3] ∪ (5/3, 2)``.
    """

    gate_swapped: bool = False
    lo: mpq = mpq(1, 3)
    hi: mpq = mpq(5, 3)

    def contains(self, c) -> bool:
        c = rat(c) % 2
        inside = self.lo < c <= self.hi
        return inside != self.gate_swapped

    @property
    def length(self) -> mpq:
        core = self.hi - self.lo
        return 2 - core if self.gate_swapped else core

    def __str__(self) -> str:
        if self.gate_swapped:
            return f"[0,{self.lo}] U ({self.hi},2)"
        return f"({self.lo},{self.hi}]"


BARRIERS = {
    ShapeId.TRIANGLE120: Barrier(),
    ShapeId.RHOMBUS60: Barrier(),
    ShapeId.KITE: Barrier(gate_swapped=True),
}


def _rgcd(a: mpq, b: mpq) -> mpq:
    """gcd of two rationals (generator of aZ + bZ), nonnegative."""
    a, b = mpq(a), mpq(b)
    den = a.denominator * b.denominator
    return mpq(gcd(int(a * den), int(b * den)), den)


def _egcd(a: int, b: int):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, p, q = _egcd(b, a % b)
    return g, q, p - (a // b) * q


@dataclass(frozen=True)
class Lattice:
    """Rank-2 lattice in Hermite form: ``b1 = (u, v)``, ``b2 = (0, h)``."""

    b1: tuple
    b2: tuple

    @classmethod
    def generated_by(cls, vectors) -> "Lattice":
        vectors = [(mpq(v[0]), mpq(v[1])) for v in vectors]
        vectors = [v for v in vectors if v != (0, 0)]
        den = 1
        for v in vectors:
            den = den * v[0].denominator // gcd(den, v[0].denominator)
            den = den * v[1].denominator // gcd(den, v[1].denominator)
        pivot = None
        h = 0
        for v in vectors:
            w = (int(v[0] * den), int(v[1] * den))
            if w[0] == 0:
                h = gcd(h, w[1])
                continue
            if pivot is None:
                pivot = w
                continue
            g, p, q = _egcd(pivot[0], w[0])
            new = (p * pivot[0] + q * w[0], p * pivot[1] + q * w[1])
            other = (w[0] // g * pivot[1] - pivot[0] // g * w[1])
            h = gcd(h, other)
            pivot = new
        if pivot is None or h == 0:
            raise ValueError("translations do not span a rank-2 lattice")
        if pivot[0] < 0:
            pivot = (-pivot[0], -pivot[1])
        pv = pivot[1] % h
        return cls((mpq(pivot[0], den), mpq(pv, den)), (ZERO, mpq(h, den)))

    def coords(self, p) -> tuple:
        s = mpq(p[0]) / self.b1[0]
        t = (mpq(p[1]) - s * self.b1[1]) / self.b2[1]
        return s, t

    def contains(self, v) -> bool:
        s, t = self.coords(v)
        return s.denominator == 1 and t.denominator == 1

    def reduce(self, p) -> tuple:
        """Canonical representative of ``p`` modulo the lattice (as coords)."""
        s, t = self.coords(p)
        return s - floor(s), t - floor(t)

    def vector(self, i, j) -> tuple:
        return (i * self.b1[0] + j * self.b2[0], i * self.b1[1] + j * self.b2[1])

    @property
    def covolume(self) -> mpq:
        return abs(self.b1[0] * self.b2[1] - self.b1[1] * self.b2[0])


@dataclass(frozen=True)
class EdgeCrossing:
    t: mpq
    point: ScaledPoint
    line: InclineLine
    is_vertex_hit: bool


@dataclass(frozen=True)
class Family:
    """Edges of one incline class, periodic under the translation lattice.

    Lines carrying edges have intercepts ``start + k * period`` for ``start``
    in ``patterns``; on such a line, after undoing ``k`` copies of ``shift``
    (a lattice vector moving intercepts by ``period``), the along-line
    coordinate modulo ``along_period`` falls in one of the stored intervals.
    """

    cls: InclineClass
    period: mpq
    shift: tuple
    along_period: mpq
    patterns: dict = field(hash=False)

    @property
    def starts(self) -> tuple:
        return tuple(sorted(self.patterns))

    def progression(self) -> tuple:
        """``(start, step)`` of the line intercepts as one arithmetic progression."""
        starts = self.starts
        if len(starts) == 1:
            return starts[0], self.period
        step = starts[1] - starts[0]
        n = len(starts)
        if all(starts[i] == starts[0] + i * step for i in range(n)) and n * step == self.period:
            return starts[0], step
        raise ValueError(f"{self.cls.name} intercepts are not a single progression")

    def _shift_along(self) -> mpq:
        return self.cls.along(self.shift)

    def status(self, level: mpq, p) -> Optional[str]:
        """``None`` (no edge), ``"edge"`` (edge interior) or ``"end"`` (vertex)."""
        r = level % self.period
        intervals = self.patterns.get(r)
        if intervals is None:
            return None
        k = (level - r) / self.period
        lam = (self.cls.along(p) - k * self._shift_along()) % self.along_period
        return _lookup(intervals, lam, self.along_period)

    def lines_between(self, lo: mpq, hi: mpq) -> Iterator[mpq]:
        """Intercepts of edge-carrying lines in the closed range [lo, hi]."""
        for r in self.starts:
            k0 = -floor((r - lo) / self.period)
            k1 = floor((hi - r) / self.period)
            for k in range(k0, k1 + 1):
                yield r + k * self.period


def _lookup(intervals, lam, period):
    for lo, hi in intervals:
        for v in (lam, lam + period):
            if v == lo or v == hi:
                return "end"
            if lo < v < hi:
                return "edge"
    return None


def _polygon_edges(poly):
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        cls = InclineClass.of_direction((q.x - p.x, q.y - p.y))
        if cls is None:
            raise ValueError(f"edge {p}-{q} is not on an incline")
        yield p, q, InclineLine.through(cls, p)


def _halfplanes(poly):
    """Outward-normal half-planes ``a*x + b*y <= c`` of a CCW convex polygon."""
    out = []
    for p, q, _ in _polygon_edges(poly):
        a, b = q.y - p.y, -(q.x - p.x)
        out.append((a, b, a * p.x + b * p.y))
    return out


def contains_ahead(poly, p, d) -> bool:
    """True iff ``p + eps*d`` lies in the interior of ``poly`` for small eps."""
    for a, b, c in _halfplanes(poly):
        s = a * p[0] + b * p[1]
        if s > c:
            return False
        if s == c and a * d[0] + b * d[1] >= 0:
            return False
    return True


def _lin_key(g: AffineMap):
    return g.m


@dataclass(frozen=True)
class Tessellation:
    shape: ShapeId
    polygon: tuple
    generators: tuple
    coset_reps: dict = field(hash=False, repr=False)
    lattice: Lattice = None
    families: dict = field(default=None, hash=False, repr=False)
    vertex_classes: frozenset = field(default=frozenset(), repr=False)
    barrier: Optional[Barrier] = None
    edges_per_strip: Optional[int] = None

    @property
    def strip_weight(self) -> Optional[int]:
        return None if self.edges_per_strip is None else 2 * self.edges_per_strip

    @property
    def classes(self) -> frozenset:
        return frozenset(self.families)

    def is_vertex(self, p) -> bool:
        return self.lattice.reduce(p) in self.vertex_classes

    def edge_status(self, line: InclineLine, p) -> Optional[str]:
        fam = self.families.get(line.cls)
        if fam is None:
            return None
        return fam.status(line.offset, p)

    def on_edge(self, p) -> bool:
        if self.is_vertex(p):
            return True
        return any(f.status(c.level(p), p) for c, f in self.families.items())

    def crossings(self, origin, direction, t_max) -> list:
        """All edge crossings of ``origin + t*direction`` for ``0 < t <= t_max``."""
        dx, dy = mpq(direction[0]), mpq(direction[1])
        if dx == 0 and dy == 0:
            raise ValueError("zero direction")
        t_max = mpq(t_max)
        ox, oy = mpq(origin[0]), mpq(origin[1])
        found = {}
        for cls, fam in self.families.items():
            ld = cls.level((dx, dy))
            if ld == 0:
                continue
            l0 = cls.level((ox, oy))
            l1 = l0 + t_max * ld
            lo, hi = (l0, l1) if ld > 0 else (l1, l0)
            for b in fam.lines_between(lo, hi):
                t = (b - l0) / ld
                if t <= 0:
                    continue
                p = ScaledPoint(ox + t * dx, oy + t * dy)
                st = fam.status(b, p)
                if st is None:
                    continue
                prev = found.get(t)
                line = InclineLine(cls, b)
                if prev is None:
                    found[t] = EdgeCrossing(t, p, line, st == "end")
                else:
                    # two edges can only meet at a vertex
                    found[t] = EdgeCrossing(t, p, prev.line, True)
        return [found[t] for t in sorted(found)]

    # -- tiles -------------------------------------------------------------

    def tile(self, g: AffineMap) -> tuple:
        pts = tuple(g(p) for p in self.polygon)
        if g.det < 0:
            pts = pts[::-1]
        return pts

    def neighbours(self, g: AffineMap):
        for s in self.generators:
            yield g @ s

    def locate(self, p, d, max_depth: int = 8) -> AffineMap:
        """Group element ``g`` with ``p + eps*d`` inside the tile ``g(P)``."""
        seen = set()
        queue = deque([(AffineMap.identity(), 0)])
        while queue:
            g, depth = queue.popleft()
            key = frozenset(self.tile(g))
            if key in seen:
                continue
            seen.add(key)
            if contains_ahead(self.tile(g), p, d):
                return g
            if depth < max_depth:
                queue.extend((h, depth + 1) for h in self.neighbours(g))
        raise ValueError(f"no tile found ahead of {p} in direction {d}")

    def tiles_in_box(self, xmin, xmax, ymin, ymax, limit: int = 20000) -> list:
        """Tiles (vertex tuples) whose bounding boxes meet the box.

        The search is seeded with lattice translates of the coset
        representatives around the box centre, so boxes far from the origin
        are found without walking there.
        """
        xmin, xmax, ymin, ymax = (mpq(v) for v in (xmin, xmax, ymin, ymax))

        def meets(poly):
            xs = [q.x for q in poly]
            ys = [q.y for q in poly]
            return not (max(xs) < xmin or min(xs) > xmax or max(ys) < ymin or min(ys) > ymax)

        s, t = self.lattice.coords(((xmin + xmax) / 2, (ymin + ymax) / 2))
        i0, j0 = floor(s), floor(t)
        queue = deque()
        r = 1
        while not queue:
            for i in range(i0 - r, i0 + r + 1):
                for j in range(j0 - r, j0 + r + 1):
                    shift = AffineMap.translation(self.lattice.vector(i, j))
                    for rep in self.coset_reps.values():
                        g = shift @ rep
                        if meets(self.tile(g)):
                            queue.append(g)
            r += 1
        out = []
        seen = set()
        while queue and len(out) < limit:
            g = queue.popleft()
            poly = self.tile(g)
            key = frozenset(poly)
            if key in seen:
                continue
            seen.add(key)
            if not meets(poly):
                continue
            out.append(poly)
            queue.extend(self.neighbours(g))
        out.sort()
        return out


def _point_group_reps(generators):
    reps = {_lin_key(AffineMap.identity()): AffineMap.identity()}
    queue = deque([AffineMap.identity()])
    while queue:
        g = queue.popleft()
        for s in generators:
            h = g @ s
            k = _lin_key(h)
            if k not in reps:
                if len(reps) > 48:
                    raise ValueError("point group is not finite")
                reps[k] = h
                queue.append(h)
    return reps


def _translation_lattice(generators, reps) -> Lattice:
    vecs = []
    for g in reps.values():
        for s in generators:
            h = g @ s
            t = h @ reps[_lin_key(h)].inverse()
            assert t.is_translation()
            vecs.append(t.t)
    return Lattice.generated_by(vecs)


def _family(cls: InclineClass, lattice: Lattice, segments) -> Family:
    l1 = cls.level(lattice.b1)
    l2 = cls.level(lattice.b2)
    g = _rgcd(l1, l2)
    i1, i2 = int(l1 / g), int(l2 / g)
    _, p, q = _egcd(i1, i2)
    shift = lattice.vector(p, q)
    w = lattice.vector(i2, -i1)
    along_period = abs(cls.along(w))
    a_shift = cls.along(shift)
    patterns = {}
    for lvl, lo, hi in segments:
        r = lvl % g
        k = (lvl - r) / g
        lo, hi = lo - k * a_shift, hi - k * a_shift
        m = floor(lo / along_period)
        lo, hi = lo - m * along_period, hi - m * along_period
        patterns.setdefault(r, set()).add((lo, hi))
    patterns = {r: tuple(sorted(v)) for r, v in patterns.items()}
    return Family(cls, g, shift, along_period, patterns)


def build(shape: ShapeId) -> Tessellation:
    shape = ShapeId.parse(shape) if isinstance(shape, str) else shape
    poly = FUNDAMENTAL[shape]
    generators = tuple(AffineMap.reflection(line) for _, _, line in _polygon_edges(poly))
    reps = _point_group_reps(generators)
    lattice = _translation_lattice(generators, reps)

    segments = {}
    vertex_classes = set()
    for g in reps.values():
        tile = tuple(g(p) for p in poly)
        for p in tile:
            vertex_classes.add(lattice.reduce(p))
        for p, q, line in _polygon_edges(tile if g.det > 0 else tile[::-1]):
            a, b = sorted((line.cls.along(p), line.cls.along(q)))
            segments.setdefault(line.cls, set()).add((line.offset, a, b))
    families = {cls: _family(cls, lattice, segs) for cls, segs in segments.items()}

    return Tessellation(
        shape=shape,
        polygon=poly,
        generators=generators,
        coset_reps=reps,
        lattice=lattice,
        families=families,
        vertex_classes=frozenset(vertex_classes),
        barrier=BARRIERS.get(shape),
        edges_per_strip=EDGES_PER_STRIP.get(shape),
    )


_CACHE: dict = {}


def get(shape) -> Tessellation:
    """Memoised :func:`build`; tessellations are immutable."""
    shape = ShapeId.parse(shape) if isinstance(shape, str) else shape
    if shape not in _CACHE:
        _CACHE[shape] = build(shape)
    return _CACHE[shape]


def derived_barrier(tess: Tessellation) -> list:
    """Closed fence intervals covered by vertical edges on the lines x=0, x=1.

    Read off the V90 family; used to check the stated barrier constants.
    """
    fam = tess.families.get(InclineClass.V90)
    if fam is None:
        return []
    pieces = []
    for alpha in (0, 1):
        x = mpq(alpha)
        r = x % fam.period
        if r not in fam.patterns:
            continue
        base = (x - r) / fam.period * fam._shift_along()
        for lo, hi in fam.patterns[r]:
            for m in range(-4, 5):
                a = lo + base + m * fam.along_period + alpha
                b = hi + base + m * fam.along_period + alpha
                if b <= 0 or a >= 2:
                    continue
                pieces.append((max(a, ZERO), min(b, mpq(2))))
    pieces.sort()
    merged = []
    for a, b in pieces:
        if merged and a <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return merged


__all__ = [
    "Barrier",
    "EdgeCrossing",
    "Family",
    "Lattice",
    "ShapeId",
    "Tessellation",
    "build",
    "get",
    "derived_barrier",
    "contains_ahead",
]
