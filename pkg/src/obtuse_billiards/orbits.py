"""Periodicity engines: the unfolding tracer and the folding oracle.

The tracer follows the straight segment ``(a, 0) + s*(x, y)`` through the
tessellation, counts the edges it cuts and composes the reflections in them;
the orbit closes when that composition maps the initial point to the current
one and fixes the direction.  The folding oracle bounces a point around inside
the fundamental polygon and waits for the exact (point, direction) state to
repeat.  The two share nothing beyond the geometry kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Optional

from gmpy2 import mpq

from .geometry import (
    AffineMap,
    InclineClass,
    InclineLine,
    ScaledDirection,
    ScaledPoint,
    rat,
    reflect_direction,
)
from .tessellation import Tessellation, _halfplanes, _polygon_edges, _rgcd, contains_ahead


class Status(Enum):
    PERIODIC = "periodic"
    SINGULAR = "singular"
    TRUNCATED = "truncated"


@dataclass(frozen=True)
class DirectionPair:
    x: int
    y: int

    def __post_init__(self):
        if self.x < 0 or self.y < 0:
            raise ValueError("direction pairs are non-negative")
        if self.x == 0 and self.y == 0:
            raise ValueError("(0, 0) is not a direction")
        if gcd(self.x, self.y) != 1:
            raise ValueError(f"gcd({self.x}, {self.y}) != 1")

    @property
    def vector(self) -> ScaledDirection:
        return ScaledDirection(mpq(self.x), mpq(self.y))

    @property
    def normalized(self) -> bool:
        """Initial angle in [60, 90] degrees."""
        return self.x < self.y or (self.x, self.y) in ((1, 1), (0, 1))

    @property
    def hexagon_range(self) -> bool:
        """Initial angle strictly between 30 and 60 degrees."""
        return 3 * self.y > self.x > self.y


def pair(x, y=None) -> DirectionPair:
    if isinstance(x, DirectionPair):
        return x
    if y is None:
        x, y = x
    return DirectionPair(int(x), int(y))


@dataclass
class OrbitResult:
    status: Status
    period: Optional[int] = None
    T: Optional[mpq] = None
    N: Optional[int] = None
    bounce_points: list = field(default_factory=list)
    terminal_class: Optional[InclineClass] = None
    terminal_point: Optional[ScaledPoint] = None
    strikes: int = 0

    @property
    def periodic(self) -> bool:
        return self.status is Status.PERIODIC


# Symmetries of all three obtuse tessellations used to re-base an unfolding:
# rotation by +60 degrees about C = (1, 0), and reflection in the 60-degree
# incline through C.
_ROT60 = AffineMap.linear(((mpq(1, 2), mpq(-3, 2)), (mpq(1, 2), mpq(1, 2))))
_C = ScaledPoint(mpq(1), mpq(0))
ROTATE_60 = AffineMap.translation(_C) @ _ROT60 @ AffineMap.translation((-_C.x, -_C.y))
REFLECT_60 = AffineMap.reflection(InclineLine(InclineClass.D60, -1))


def reduce_angle(x, y=None):
    """Re-base a direction into the [60, 90] degree range.

    Returns ``(pair, frame)`` where ``frame`` is a tessellation symmetry
    whose linear part carries ``(x, y)`` to a positive multiple of the
    returned pair.  Angles up to 30 degrees are rotated by 60; angles in
    (30, 60) are reflected in a 60-degree incline.
    """
    d = pair(x, y)
    if d.y == 0:
        raise ValueError("horizontal direction runs along an edge")
    if d.normalized:
        return d, AffineMap.identity()
    frame = ROTATE_60 if 3 * d.y <= d.x else REFLECT_60
    v = frame.apply_linear(d.vector)
    den = v.dx.denominator * v.dy.denominator
    nx, ny = int(v.dx * den), int(v.dy * den)
    g = gcd(nx, ny)
    return DirectionPair(nx // g, ny // g), frame


def first_alignment(x, y=None) -> int:
    """Least horizontal extent T at which the endpoints align."""
    d = pair(x, y)
    if d.x == 0:
        return 2
    return d.x if (d.x - d.y) % 2 == 0 else 2 * d.x


def alignment_step(tess: Tessellation, d: DirectionPair) -> mpq:
    """Least s > 0 with s*(x, y) in the tessellation's translation lattice."""
    c1, c2 = tess.lattice.coords(d.vector)
    return 1 / _rgcd(c1, c2)


def _scale(d: DirectionPair) -> int:
    # T is measured horizontally, or vertically for the vertical direction
    return d.x if d.x else d.y


@dataclass
class UnfoldTrace:
    N: int
    vertex_hit: bool
    terminal_class: Optional[InclineClass]
    crossings: list
    sigma: AffineMap
    start_tile: AffineMap
    terminal_point: ScaledPoint


def unfold_trace(tess: Tessellation, a, d, T) -> UnfoldTrace:
    """Trace the unfolding from ``(a, 0)`` along ``d`` over horizontal extent ``T``.

    ``sigma`` is the composition of the reflections in the cut edges,
    expressed as a map of the plane (terminal tile = sigma(initial tile)).
    """
    d = pair(d)
    a = rat(a)
    P = ScaledPoint(a, mpq(0))
    s_max = rat(T) / _scale(d)
    crossings = tess.crossings(P, d.vector, s_max)
    g0 = tess.locate(P, d.vector)
    g = g0
    hit = False
    for c in crossings:
        if c.is_vertex_hit:
            hit = True
            break
        g = AffineMap.reflection(c.line) @ g
    Q = P.shifted(d.vector, s_max)
    last = crossings[-1] if crossings else None
    terminal = last.line.cls if last is not None and last.t == s_max else None
    return UnfoldTrace(
        N=len(crossings),
        vertex_hit=hit,
        terminal_class=terminal,
        crossings=crossings,
        sigma=g @ g0.inverse(),
        start_tile=g0,
        terminal_point=Q,
    )


def returns_state(sigma: AffineMap, P, Q, d) -> bool:
    """The fold of the unfolding is back at its initial point and heading."""
    return sigma.apply_linear(d) == tuple(d) and sigma(P) == Q


def detect_period_unfolding(tess: Tessellation, a, d, max_multiple: int = 4) -> OrbitResult:
    """Least closing extent among the multiples of the first alignment."""
    d = pair(d)
    a = rat(a)
    P = ScaledPoint(a, mpq(0))
    step = alignment_step(tess, d)
    v = d.vector
    g0 = tess.locate(P, v)
    g = g0
    N = 0
    for k in range(1, max_multiple + 1):
        origin = P.shifted(v, (k - 1) * step)
        for c in tess.crossings(origin, v, step):
            if c.is_vertex_hit:
                return OrbitResult(Status.SINGULAR, strikes=N, terminal_point=c.point)
            g = AffineMap.reflection(c.line) @ g
            N += 1
            last = c
        Q = P.shifted(v, k * step)
        if returns_state(g @ g0.inverse(), P, Q, v):
            terminal = last.line.cls if last.point == Q else None
            return OrbitResult(
                Status.PERIODIC,
                period=N,
                T=k * step * _scale(d),
                N=N,
                terminal_class=terminal,
                terminal_point=Q,
                strikes=N,
            )
    raise RuntimeError(
        f"{tess.shape.value} ({d.x},{d.y}) a={a}: no closure within {max_multiple} alignments"
    )


def default_max_bounces(d) -> int:
    d = pair(d)
    return max(100, 10 * (16 * d.y + 8 * d.x))


def fold(tess: Tessellation, start, direction, max_bounces: int = 10_000) -> OrbitResult:
    """Bounce inside the fundamental polygon until the launch state recurs."""
    poly = tess.polygon
    planes = _halfplanes(poly)
    classes = [line.cls for _, _, line in _polygon_edges(poly)]
    px, py = rat(start[0]), rat(start[1])
    dx, dy = rat(direction[0]), rat(direction[1])
    if dx == 0 and dy == 0:
        raise ValueError("zero direction")
    if not any(a * px + b * py == c for a, b, c in planes):
        raise ValueError(f"start {start} is not on the boundary")
    if any(a * px + b * py > c for a, b, c in planes):
        raise ValueError(f"start {start} is outside the polygon")
    if not contains_ahead(poly, (px, py), (dx, dy)):
        raise ValueError("direction does not point into the polygon")
    p0, d0 = (px, py), (dx, dy)
    bounces = []
    for n in range(1, max_bounces + 1):
        best = None
        tie = False
        for i, (a, b, c) in enumerate(planes):
            den = a * dx + b * dy
            if den <= 0:
                continue
            t = (c - a * px - b * py) / den
            if best is None or t < best[0]:
                best, tie = (t, i), False
            elif t == best[0]:
                tie = True
        t, i = best
        px, py = px + t * dx, py + t * dy
        q = ScaledPoint(px, py)
        if tie:
            return OrbitResult(Status.SINGULAR, bounce_points=bounces, strikes=n - 1,
                               terminal_point=q)
        bounces.append(q)
        m = classes[i].matrix
        dx, dy = m[0][0] * dx + m[0][1] * dy, m[1][0] * dx + m[1][1] * dy
        if (px, py) == p0 and (dx, dy) == d0:
            return OrbitResult(Status.PERIODIC, period=n, bounce_points=bounces, strikes=n)
    return OrbitResult(Status.TRUNCATED, bounce_points=bounces, strikes=max_bounces)


def pull_back(tess: Tessellation, a, d):
    """Launch state in the fundamental polygon for the unfolding from (a, 0).

    Returns ``(start, direction)`` with ``start`` on the boundary, or ``None``
    when the backward ray leaves through a vertex.
    """
    d = pair(d)
    P = ScaledPoint(rat(a), mpq(0))
    g = tess.locate(P, d.vector)
    gi = g.inverse()
    p = gi(P)
    v = gi.apply_linear(d.vector)
    planes = _halfplanes(tess.polygon)
    if any(a_ * p.x + b_ * p.y == c for a_, b_, c in planes):
        return p, v
    best, tie = None, False
    for a_, b_, c in planes:
        den = -(a_ * v.dx + b_ * v.dy)
        if den <= 0:
            continue
        t = (c - a_ * p.x - b_ * p.y) / den
        if best is None or t < best:
            best, tie = t, False
        elif t == best:
            tie = True
    if tie:
        return None
    return ScaledPoint(p.x - best * v.dx, p.y - best * v.dy), v


def fold_offset(tess: Tessellation, a, d, max_bounces: Optional[int] = None) -> OrbitResult:
    """Folding-oracle period of the orbit whose unfolding starts at (a, 0)."""
    d = pair(d)
    if max_bounces is None:
        max_bounces = default_max_bounces(d)
    launch = pull_back(tess, a, d)
    if launch is None:
        return OrbitResult(Status.SINGULAR)
    return fold(tess, launch[0], launch[1], max_bounces)


def is_singular_offset(tess: Tessellation, a, d) -> bool:
    return detect_period_unfolding(tess, a, d).status is Status.SINGULAR
