"""Contact points on the fence and the closed-form edge counts and periods.

An unfolding from ``(a, 0)`` in direction ``(x, y)`` meets the vertical line
``X = i`` at height ``(y/x)(i - a)``; its fence coordinate is
``(i + (y/x)(i - a)) mod 2``.  It cuts a vertical edge there exactly when the
coordinate lies on the barrier, and between consecutive horizontal levels it
always cuts the same number of non-vertical edges, which gives

    N = edges_per_strip * rise + (contacts on the barrier, with multiplicity).

The tables below are stored as data; :func:`edge_count_options` and
:func:`period_formula` recompute them from multiplicity, spacing and barrier
counts and refuse to answer if the two disagree.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq

from .geometry import floor, rat
from .orbits import DirectionPair, pair
from .tessellation import BARRIERS, EDGES_PER_STRIP, Barrier, ShapeId, Tessellation


def fence(alpha, beta) -> mpq:
    return (rat(alpha) + rat(beta)) % 2


def branch(x: int, y: int) -> tuple:
    """``(x mod 3, 0 if x ≡ y mod 2 else 1)``."""
    return x % 3, (x - y) % 2


@dataclass(frozen=True)
class ContactProfile:
    points: tuple  # ((fence coordinate, multiplicity), ...) sorted by coordinate
    spacing: mpq | None
    m: int | None
    b: int  # distinct contact points on the barrier
    barrier_hits: int  # contacts on the barrier counted with multiplicity
    N: int

    @property
    def equally_spaced(self) -> bool:
        return self.spacing is not None

    @property
    def uniform_multiplicity(self) -> bool:
        return self.m is not None


def contact_points(tess: Tessellation, a, d, T) -> ContactProfile:
    """Enumerate c_i for the integers i with 0 < i - a <= T."""
    d = pair(d)
    if d.x < 1:
        raise ValueError("contact points need x >= 1")
    a, T = rat(a), rat(T)
    slope = mpq(d.y, d.x)
    counts = Counter()
    i = floor(a) + 1
    while i - a <= T:
        counts[fence(i, slope * (i - a))] += 1
        i += 1
    points = tuple(sorted(counts.items()))
    barrier = tess.barrier
    on_barrier = [(c, k) for c, k in points if barrier.contains(c)]
    mults = {k for _, k in points}
    m = mults.pop() if len(mults) == 1 else None
    spacing = None
    if len(points) == 1:
        spacing = mpq(2)
    elif points:
        gaps = {points[j + 1][0] - points[j][0] for j in range(len(points) - 1)}
        gaps.add(points[0][0] + 2 - points[-1][0])
        if len(gaps) == 1:
            spacing = gaps.pop()
    hits = sum(k for _, k in on_barrier)
    rise = slope * T
    N = tess.edges_per_strip * rise + hits
    if N.denominator != 1:
        raise ValueError("N is only defined for integer rises")
    return ContactProfile(points, spacing, m, len(on_barrier), hits, int(N))


def multiplicity_and_spacing(x: int, y: int) -> tuple:
    """``(m, s)`` of the contact points over horizontal extent 2x."""
    d = pair(x, y)
    if d.x < 1:
        raise ValueError("x >= 1 required")
    if (d.x - d.y) % 2 == 0:
        return 2, mpq(2, d.x)
    return 1, mpq(1, d.x)


def _barrier_for(shape) -> Barrier:
    shape = ShapeId.parse(shape) if isinstance(shape, str) else shape
    return BARRIERS[shape]


def barrier_count_range(x: int, y: int, shape=ShapeId.TRIANGLE120) -> set:
    _, s = multiplicity_and_spacing(x, y)
    q = _barrier_for(shape).length / s
    if q.denominator == 1:
        return {int(q)}
    return {floor(q), floor(q) + 1}


def barrier_count_at(a, x: int, y: int, shape=ShapeId.TRIANGLE120) -> int:
    """Contacts on the barrier as a function of the offset.

    floor((5/3 + a y/x)/s) - floor((1/3 + a y/x)/s), with s the spacing of
    :func:`multiplicity_and_spacing`; for the kite the complement count.
    """
    _, s = multiplicity_and_spacing(x, y)
    a = rat(a)
    shift = a * y / x
    barrier = _barrier_for(shape)
    b = floor((barrier.hi + shift) / s) - floor((barrier.lo + shift) / s)
    if barrier.gate_swapped:
        return int(2 / s) - b
    return b


# Edge-count tables: N = w*y + (cx*x + c)/3, keyed by branch(x, y).
# Periods: p = py*y + (px*x + c)/3.
EDGE_TABLES = {
    ShapeId.TRIANGLE120: {
        (0, 0): [(8, 4, 0)],
        (0, 1): [(8, 4, 0)],
        (1, 0): [(8, 4, 2), (8, 4, -4)],
        (1, 1): [(8, 4, -1), (8, 4, 2)],
        (2, 0): [(8, 4, -2), (8, 4, 4)],
        (2, 1): [(8, 4, 1), (8, 4, -2)],
    },
    ShapeId.RHOMBUS60: {
        (0, 0): [(4, 4, 0)],
        (0, 1): [(4, 4, 0)],
        (1, 0): [(4, 4, 2), (4, 4, -4)],
        (1, 1): [(4, 4, -1), (4, 4, 2)],
        (2, 0): [(4, 4, -2), (4, 4, 4)],
        (2, 1): [(4, 4, 1), (4, 4, -2)],
    },
    ShapeId.KITE: {
        (0, 0): [(6, 2, 0)],
        (0, 1): [(6, 2, 0)],
        (1, 0): [(6, 2, -2), (6, 2, 4)],
        (1, 1): [(6, 2, 1), (6, 2, -2)],
        (2, 0): [(6, 2, 2), (6, 2, -4)],
        (2, 1): [(6, 2, -1), (6, 2, 2)],
    },
}

PERIOD_TABLES = {
    ShapeId.TRIANGLE120: {
        (0, 0): [(4, 2, 0)],
        (0, 1): [(8, 4, 0)],
        (1, 0): [(4, 2, -2), (8, 4, 2)],
        (1, 1): [(16, 8, -2), (8, 4, 2)],
        (2, 0): [(4, 2, 2), (8, 4, -2)],
        (2, 1): [(16, 8, 2), (8, 4, -2)],
    },
    ShapeId.RHOMBUS60: {
        (0, 0): [(2, 2, 0)],
        (0, 1): [(4, 4, 0)],
        (1, 0): [(2, 2, -2), (4, 4, 2)],
        (1, 1): [(4, 4, 2), (8, 8, -2)],
        (2, 0): [(2, 2, 2), (4, 4, -2)],
        (2, 1): [(4, 4, -2), (8, 8, 2)],
    },
    ShapeId.KITE: {
        (0, 0): [(3, 1, 0)],
        (0, 1): [(6, 2, 0)],
        (1, 0): [(3, 1, 2), (6, 2, -2)],
        (1, 1): [(6, 2, -2), (12, 4, 2)],
        (2, 0): [(3, 1, -2), (6, 2, 2)],
        (2, 1): [(6, 2, 2), (12, 4, -2)],
    },
}


def evaluate(expr, x: int, y: int) -> int:
    cy, cx, c = expr
    v = Fraction(cy * y) + Fraction(cx * x + c, 3)
    if v.denominator != 1:
        raise ValueError(f"{expr} is not integral at ({x}, {y})")
    return int(v)


def _shape(shape) -> ShapeId:
    shape = ShapeId.parse(shape) if isinstance(shape, str) else shape
    if shape is ShapeId.HEXAGON:
        raise ValueError("no closed-form counts for the hexagon")
    return shape


def _check(x, y):
    d = pair(x, y)
    if not d.normalized:
        raise ValueError(f"({x}, {y}) is outside the [60, 90] degree range")
    return d


def computed_edge_counts(shape, x: int, y: int) -> set:
    """``edges_per_strip * 2y + m*b`` over the admissible barrier counts."""
    shape = _shape(shape)
    d = _check(x, y)
    w = EDGES_PER_STRIP[shape]
    if d.x == 0:
        # a vertical unfolding at non-integer a never meets a vertical incline
        return {2 * w * d.y}
    m, _ = multiplicity_and_spacing(d.x, d.y)
    return {2 * w * d.y + m * b for b in barrier_count_range(d.x, d.y, shape)}


def edge_count_options(shape, x: int, y: int) -> set:
    """``{(N, N mod 4)}`` for N over horizontal extent 2x."""
    shape = _shape(shape)
    d = _check(x, y)
    table = {evaluate(e, d.x, d.y) for e in EDGE_TABLES[shape][branch(d.x, d.y)]}
    computed = computed_edge_counts(shape, d.x, d.y)
    if table != computed:
        raise AssertionError(f"{shape.value} ({x},{y}): table {table} != computed {computed}")
    return {(n, n % 4) for n in table}


def period_from_count(N: int, x: int, y: int) -> tuple:
    """``(period, T)`` from N over extent 2x by parity and N mod 4."""
    scale = x if x else y
    if (x - y) % 2 == 0:
        if N % 4 == 0:
            return N // 2, scale
        if N % 4 == 2:
            return N, 2 * scale
        raise ValueError(f"odd N={N} with x ≡ y (mod 2)")
    if N % 2 == 0:
        return N, 2 * scale
    return 2 * N, 4 * scale


@dataclass(frozen=True)
class PeriodPrediction:
    shape: ShapeId
    x: int
    y: int
    branch: tuple
    candidates: tuple  # sorted
    extents: dict  # period -> T

    @property
    def mono(self) -> bool:
        return len(self.candidates) == 1


def period_formula(shape, x: int, y: int) -> PeriodPrediction:
    shape = _shape(shape)
    d = _check(x, y)
    derived = {}
    for n, _ in edge_count_options(shape, d.x, d.y):
        p, T = period_from_count(n, d.x, d.y)
        derived[p] = T
    table = {evaluate(e, d.x, d.y) for e in PERIOD_TABLES[shape][branch(d.x, d.y)]}
    if table != set(derived):
        raise AssertionError(f"{shape.value} ({x},{y}): formula {table} != derived {set(derived)}")
    return PeriodPrediction(shape, d.x, d.y, branch(d.x, d.y), tuple(sorted(derived)), derived)


def predicted_period_at(shape, a, x: int, y: int) -> int:
    """Offset-resolved period: barrier count at ``a`` fed through the parity rules."""
    shape = _shape(shape)
    d = _check(x, y)
    w = EDGES_PER_STRIP[shape]
    if d.x == 0:
        N = 2 * w * d.y
    else:
        m, _ = multiplicity_and_spacing(d.x, d.y)
        N = 2 * w * d.y + m * barrier_count_at(a, d.x, d.y, shape)
    return period_from_count(N, d.x, d.y)[0]


def brute_first_alignment(x: int, y: int, limit: int | None = None) -> int:
    """Least integer T > 0 with (y/x)T integral and T + (y/x)T even."""
    limit = limit or 4 * max(x, 1) + 4
    for T in range(1, limit + 1):
        rise = Fraction(y * T, x) if x else None
        if x == 0:
            # vertical: T counts the rise itself
            if T % 2 == 0:
                return T
            continue
        if rise.denominator == 1 and (T + rise) % 2 == 0:
            return T
    raise ValueError("no alignment below limit")


__all__ = [
    "ContactProfile",
    "DirectionPair",
    "PeriodPrediction",
    "barrier_count_at",
    "barrier_count_range",
    "branch",
    "brute_first_alignment",
    "computed_edge_counts",
    "contact_points",
    "edge_count_options",
    "evaluate",
    "fence",
    "multiplicity_and_spacing",
    "period_formula",
    "period_from_count",
    "predicted_period_at",
]
