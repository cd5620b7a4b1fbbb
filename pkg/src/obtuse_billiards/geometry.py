"""Exact geometry in the scaled frame.

Points are stored as ``(x, y)`` where ``x`` counts units of ``u`` horizontally
and ``y`` counts units of ``sqrt(3)*u`` vertically.  In this frame every one of
the six incline directions (multiples of 30 degrees) has a rational slope and
every reflection across such an incline is a rational affine map, so the whole
engine runs on ``gmpy2.mpq`` without ever touching floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple, Optional

from gmpy2 import mpq

Rational = mpq

ZERO = mpq(0)
ONE = mpq(1)
HALF = mpq(1, 2)


def rat(value) -> mpq:
    """Coerce ints, ``Fraction``, ``mpq`` or ``"p/q"`` strings to ``mpq``."""
    if isinstance(value, str):
        return mpq(value.strip())
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        raise TypeError("floats are not admitted in the exact core")
    return mpq(value)


def rat_str(value) -> str:
    """Serialise a rational as ``"p/q"`` (always with a denominator)."""
    value = mpq(value)
    return f"{value.numerator}/{value.denominator}"


def floor(value) -> int:
    return int(math.floor(value))


class ScaledPoint(NamedTuple):
    x: mpq
    y: mpq

    @classmethod
    def of(cls, x, y) -> "ScaledPoint":
        return cls(rat(x), rat(y))

    def __add__(self, d):  # type: ignore[override]
        return ScaledPoint(self.x + d[0], self.y + d[1])

    def __sub__(self, other):
        return ScaledPoint(self.x - other[0], self.y - other[1])

    def shifted(self, d, t) -> "ScaledPoint":
        return ScaledPoint(self.x + t * d[0], self.y + t * d[1])

    def true_coords(self) -> tuple[float, float]:
        return float(self.x), float(self.y) * math.sqrt(3)


class ScaledDirection(NamedTuple):
    dx: mpq
    dy: mpq

    @classmethod
    def of(cls, dx, dy) -> "ScaledDirection":
        d = cls(rat(dx), rat(dy))
        if d.dx == 0 and d.dy == 0:
            raise ValueError("zero direction")
        return d

    def parallel_to(self, other) -> bool:
        """Projective equality up to *positive* scaling."""
        return (self.dx * other[1] == self.dy * other[0]
                and self.dx * other[0] + self.dy * other[1] > 0)


def quad_form(v) -> mpq:
    """Squared true length of a scaled vector (with u = 1)."""
    return v[0] * v[0] + 3 * v[1] * v[1]


def sq_distance(p, q) -> mpq:
    return quad_form((p[0] - q[0], p[1] - q[1]))


# Reflection across a line at angle phi, conjugated by diag(1, 1/sqrt 3):
#   [[cos 2phi, sqrt3 sin 2phi], [sin 2phi / sqrt3, -cos 2phi]]
_MATRICES = {
    0: ((1, 0), (0, -1)),
    30: ((HALF, mpq(3, 2)), (HALF, -HALF)),
    60: ((-HALF, mpq(3, 2)), (HALF, HALF)),
    90: ((-1, 0), (0, 1)),
    120: ((-HALF, mpq(-3, 2)), (-HALF, HALF)),
    150: ((HALF, mpq(-3, 2)), (-HALF, -HALF)),
}


class InclineClass(Enum):
    H0 = 0
    D30 = 30
    D60 = 60
    V90 = 90
    D120 = 120
    D150 = 150

    @property
    def degrees(self) -> int:
        return self.value

    @property
    def slope(self) -> Optional[mpq]:
        """Scaled slope ``tan(angle)/sqrt(3)``; ``None`` for the vertical."""
        return _SLOPES[self]

    @property
    def matrix(self):
        return _MATRICES[self.value]

    @property
    def direction(self) -> ScaledDirection:
        if self is InclineClass.V90:
            return ScaledDirection(ZERO, ONE)
        return ScaledDirection(ONE, self.slope)

    def level(self, p) -> mpq:
        """Intercept of the line of this class through ``p``.

        y-intercept for non-vertical classes, x-intercept for V90.
        """
        if self is InclineClass.V90:
            return mpq(p[0])
        return p[1] - self.slope * p[0]

    def along(self, p) -> mpq:
        """Coordinate along a line of this class (y for V90, else x)."""
        return mpq(p[1]) if self is InclineClass.V90 else mpq(p[0])

    @classmethod
    def of_direction(cls, d) -> Optional["InclineClass"]:
        for c in cls:
            e = c.direction
            if e[0] * d[1] == e[1] * d[0]:
                return c
        return None


_SLOPES = {
    InclineClass.H0: ZERO,
    InclineClass.D30: mpq(1, 3),
    InclineClass.D60: ONE,
    InclineClass.V90: None,
    InclineClass.D120: -ONE,
    InclineClass.D150: mpq(-1, 3),
}


@dataclass(frozen=True)
class InclineLine:
    cls: InclineClass
    offset: mpq

    def __post_init__(self):
        object.__setattr__(self, "offset", rat(self.offset))

    @classmethod
    def through(cls, incline: InclineClass, p) -> "InclineLine":
        return cls(incline, incline.level(p))

    def contains(self, p) -> bool:
        return self.cls.level(p) == self.offset

    def base_point(self) -> ScaledPoint:
        if self.cls is InclineClass.V90:
            return ScaledPoint(self.offset, ZERO)
        return ScaledPoint(ZERO, self.offset)

    def reflection(self) -> "AffineMap":
        return AffineMap.reflection(self)


def _apply(m, v):
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def reflect_direction(d, incline: InclineClass) -> ScaledDirection:
    if d[0] == 0 and d[1] == 0:
        raise ValueError("zero direction")
    return ScaledDirection(*_apply(incline.matrix, d))


def reflect_point(p, line: InclineLine) -> ScaledPoint:
    b = line.base_point()
    v = _apply(line.cls.matrix, (p[0] - b.x, p[1] - b.y))
    return ScaledPoint(b.x + v[0], b.y + v[1])


def angle_of(x: int, y: int) -> float:
    """Display-only initial angle in degrees for the direction pair (x, y)."""
    if x == 0 and y == 0:
        raise ValueError("(0, 0) is not a direction")
    if x == 0:
        return 90.0
    return math.degrees(math.atan(y * math.sqrt(3) / x))


@dataclass(frozen=True)
class AffineMap:
    """``p -> M p + t`` with rational entries; used for reflection-group words."""

    m: tuple
    t: tuple

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(((ONE, ZERO), (ZERO, ONE)), (ZERO, ZERO))

    @classmethod
    def translation(cls, v) -> "AffineMap":
        return cls(((ONE, ZERO), (ZERO, ONE)), (mpq(v[0]), mpq(v[1])))

    @classmethod
    def reflection(cls, line: InclineLine) -> "AffineMap":
        m = tuple(tuple(mpq(e) for e in row) for row in line.cls.matrix)
        b = line.base_point()
        mb = _apply(m, b)
        return cls(m, (b.x - mb[0], b.y - mb[1]))

    @classmethod
    def linear(cls, m) -> "AffineMap":
        return cls(tuple(tuple(mpq(e) for e in row) for row in m), (ZERO, ZERO))

    def __call__(self, p) -> ScaledPoint:
        v = _apply(self.m, p)
        return ScaledPoint(v[0] + self.t[0], v[1] + self.t[1])

    def apply_linear(self, d) -> ScaledDirection:
        return ScaledDirection(*_apply(self.m, d))

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        """Composition ``self ∘ other``."""
        a, b = self.m, other.m
        m = ((a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
             (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]))
        t = _apply(a, other.t)
        return AffineMap(m, (t[0] + self.t[0], t[1] + self.t[1]))

    def inverse(self) -> "AffineMap":
        (a, b), (c, d) = self.m
        det = a * d - b * c
        inv = ((d / det, -b / det), (-c / det, a / det))
        t = _apply(inv, self.t)
        return AffineMap(inv, (-t[0], -t[1]))

    @property
    def det(self) -> mpq:
        (a, b), (c, d) = self.m
        return a * d - b * c

    def is_translation(self) -> bool:
        return self.m == ((1, 0), (0, 1))
