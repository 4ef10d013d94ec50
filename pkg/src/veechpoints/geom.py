"""Exact planar primitives over a quadratic field.

Every predicate returns an exact sign; there are no tolerances anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .numfield import Quad, sign

__all__ = [
    "Vec",
    "Mat2",
    "Segment",
    "Line",
    "orientation",
    "incircle",
    "parallel",
    "is_eigendirection",
    "intersect_segments",
    "line_clip_to_polygon",
    "clip_segment_to_band",
    "point_in_triangle",
    "DegenerateGeometry",
]


class DegenerateGeometry(ValueError):
    """Raised when a predicate receives a degenerate configuration."""


class Vec:
    """Point or vector with field coordinates."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x = x
        self.y = y

    def __add__(self, other: "Vec") -> "Vec":
        return Vec(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec") -> "Vec":
        return Vec(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Vec":
        return Vec(-self.x, -self.y)

    def __mul__(self, k) -> "Vec":
        return Vec(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __truediv__(self, k) -> "Vec":
        return Vec(self.x / k, self.y / k)

    def cross(self, other: "Vec"):
        return self.x * other.y - self.y * other.x

    def dot(self, other: "Vec"):
        return self.x * other.x + self.y * other.y

    def is_zero(self) -> bool:
        return not self.x and not self.y

    def __iter__(self):
        yield self.x
        yield self.y

    def __eq__(self, other):
        if not isinstance(other, Vec):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __lt__(self, other: "Vec") -> bool:
        if self.x != other.x:
            return self.x < other.x
        return self.y < other.y

    def __repr__(self):
        return f"Vec({self.x}, {self.y})"

    def as_floats(self) -> tuple[float, float]:
        return float(self.x), float(self.y)


class Mat2:
    """2x2 matrix ``[[a, b], [c, d]]`` over the field."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def identity(cls, one) -> "Mat2":
        zero = one - one
        return cls(one, zero, zero, one)

    def __matmul__(self, other):
        if isinstance(other, Vec):
            return Vec(self.a * other.x + self.b * other.y, self.c * other.x + self.d * other.y)
        return Mat2(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                    self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    __mul__ = __matmul__

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def inverse(self) -> "Mat2":
        det = self.det()
        if not det:
            raise ZeroDivisionError("singular matrix")
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def __pow__(self, n: int) -> "Mat2":
        if n < 0:
            return self.inverse() ** (-n)
        result = Mat2.identity(self.a - self.a + 1)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __repr__(self):
        return f"Mat2([[{self.a}, {self.b}], [{self.c}, {self.d}]])"


@dataclass(frozen=True)
class Segment:
    p: Vec
    q: Vec

    def direction(self) -> Vec:
        return self.q - self.p

    def is_point(self) -> bool:
        return self.p == self.q


@dataclass(frozen=True)
class Line:
    """Zero set of ``a*x + b*y + c``."""

    a: object
    b: object
    c: object

    def __call__(self, p: Vec):
        return self.a * p.x + self.b * p.y + self.c

    def is_degenerate(self) -> bool:
        return not self.a and not self.b


def orientation(p: Vec, q: Vec, r: Vec) -> int:
    """+1 if p, q, r turn counterclockwise, -1 clockwise, 0 if collinear."""
    return sign((q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x))


def incircle(a: Vec, b: Vec, c: Vec, p: Vec) -> int:
    """+1 if p is strictly inside the circumcircle of the ccw triangle abc."""
    o = orientation(a, b, c)
    if o == 0:
        raise DegenerateGeometry("incircle of a collinear triple")
    adx, ady = a.x - p.x, a.y - p.y
    bdx, bdy = b.x - p.x, b.y - p.y
    cdx, cdy = c.x - p.x, c.y - p.y
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = (alift * (bdx * cdy - cdx * bdy)
           + blift * (cdx * ady - adx * cdy)
           + clift * (adx * bdy - bdx * ady))
    return sign(det) * o


def parallel(u: Vec, v: Vec) -> bool:
    if u.is_zero() or v.is_zero():
        raise DegenerateGeometry("parallel() needs nonzero vectors")
    return not u.cross(v)


def is_eigendirection(m: Mat2, v: Vec) -> bool:
    """True iff m @ v is parallel to v; stays inside the field."""
    if v.is_zero():
        raise DegenerateGeometry("zero vector has no direction")
    return not (m @ v).cross(v)


def point_in_triangle(p: Vec, a: Vec, b: Vec, c: Vec) -> bool:
    """Closed containment for a ccw triangle."""
    return orientation(a, b, p) >= 0 and orientation(b, c, p) >= 0 and orientation(c, a, p) >= 0


def _on_segment(p: Vec, s: Segment) -> bool:
    if orientation(s.p, s.q, p) != 0:
        return False
    d = s.q - s.p
    t = (p - s.p).dot(d)
    return t >= 0 and t <= d.dot(d)


def intersect_segments(s1: Segment, s2: Segment) -> Union[None, Vec, Segment]:
    """Exact intersection of two closed segments (either may be a single point)."""
    if s1.is_point():
        return s1.p if (_on_segment(s1.p, s2) if not s2.is_point() else s1.p == s2.p) else None
    if s2.is_point():
        return s2.p if _on_segment(s2.p, s1) else None
    d1 = s1.q - s1.p
    d2 = s2.q - s2.p
    denom = d1.cross(d2)
    w = s2.p - s1.p
    if not denom:
        if w.cross(d1):
            return None
        # collinear: project onto d1
        dd = d1.dot(d1)
        t0 = w.dot(d1) / dd
        t1 = (s2.q - s1.p).dot(d1) / dd
        lo, hi = (t0, t1) if t0 <= t1 else (t1, t0)
        lo = lo if lo >= 0 else 0 * lo
        hi = hi if hi <= 1 else 0 * hi + 1
        if lo > hi:
            return None
        a, b = s1.p + d1 * lo, s1.p + d1 * hi
        return a if a == b else Segment(a, b)
    t = w.cross(d2) / denom
    u = w.cross(d1) / denom
    if t < 0 or t > 1 or u < 0 or u > 1:
        return None
    return s1.p + d1 * t


def line_clip_to_polygon(line: Line, polygon: Sequence[Vec]) -> Union[None, Vec, Segment]:
    """Intersect the zero set of ``line`` with a closed convex ccw polygon."""
    n = len(polygon)
    if n < 3 or not any(orientation(polygon[0], polygon[i], polygon[i + 1]) for i in range(1, n - 1)):
        raise DegenerateGeometry("polygon has no interior")
    if line.is_degenerate():
        raise DegenerateGeometry("line has a = b = 0")
    vals = [line(v) for v in polygon]
    signs = [sign(v) for v in vals]
    pts: list[Vec] = []
    for i in range(n):
        j = (i + 1) % n
        if signs[i] == 0:
            pts.append(polygon[i])
        elif signs[i] * signs[j] < 0:
            t = vals[i] / (vals[i] - vals[j])
            pts.append(polygon[i] + (polygon[j] - polygon[i]) * t)
    uniq: list[Vec] = []
    for p in pts:
        if p not in uniq:
            uniq.append(p)
    if not uniq:
        return None
    if len(uniq) == 1:
        return uniq[0]
    uniq.sort()
    return Segment(uniq[0], uniq[-1])


def clip_segment_to_band(seg: Segment, normal: Vec, lo, hi) -> Optional[Segment]:
    """Restrict ``seg`` to ``lo <= normal . p <= hi``; returns None if empty.

    A single surviving point is returned as a zero-length segment.
    """
    f0 = normal.dot(seg.p)
    f1 = normal.dot(seg.q)
    df = f1 - f0
    tlo, thi = 0 * f0, 0 * f0 + 1
    if not df:
        if f0 < lo or f0 > hi:
            return None
    else:
        a = (lo - f0) / df
        b = (hi - f0) / df
        if a > b:
            a, b = b, a
        tlo = a if a > tlo else tlo
        thi = b if b < thi else thi
        if tlo > thi:
            return None
    d = seg.q - seg.p
    return Segment(seg.p + d * tlo, seg.p + d * thi)
