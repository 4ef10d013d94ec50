"""Triangulated translation surfaces.

A surface is a list of counterclockwise triangles, each stored by its three
vertices in a local frame, together with an involution on half-edges.  Edge
``e`` of triangle ``t`` runs from vertex ``e`` to vertex ``e + 1`` (mod 3).

Points on the surface are :class:`SurfacePoint` values: a triangle index and
coordinates in that triangle's frame.  :func:`canonical_point` picks one
representative per geometric point so that equality is structural.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import ValidationError
from .geom import Mat2, Vec, orientation, point_in_triangle
from .numfield import Quad, QuadField

__all__ = [
    "SurfacePoint",
    "TriangulatedSurface",
    "History",
    "FlipRecord",
    "canonical_point",
    "point_representations",
    "trace_segment",
    "Piece",
]

HalfEdge = tuple[int, int]


class SurfacePoint(NamedTuple):
    tri: int
    coords: Vec

    def __repr__(self):
        return f"SurfacePoint({self.tri}, ({self.coords.x}, {self.coords.y}))"


class TriangulatedSurface:
    """Triangles glued edge to edge by translations.

    Treated as immutable by every public function; algorithms that flip edges
    work on a :meth:`copy`.
    """

    def __init__(self, triangles: Sequence[Sequence[Vec]], gluing: dict, disc: int,
                 name: Optional[str] = None, validate: bool = True):
        self.triangles: list[tuple[Vec, Vec, Vec]] = [tuple(t) for t in triangles]
        self.gluing: dict[HalfEdge, HalfEdge] = dict(gluing)
        self.disc = disc
        self.field = QuadField(disc)
        self.name = name
        if validate:
            self.validate()

    # -- basic geometry --------------------------------------------------------

    def __len__(self):
        return len(self.triangles)

    def edge(self, t: int, e: int) -> Vec:
        v = self.triangles[t]
        return v[(e + 1) % 3] - v[e]

    def edges(self, t: int) -> tuple[Vec, Vec, Vec]:
        v = self.triangles[t]
        return v[1] - v[0], v[2] - v[1], v[0] - v[2]

    def partner(self, t: int, e: int) -> HalfEdge:
        return self.gluing[(t, e)]

    def half_edges(self) -> Iterable[HalfEdge]:
        for t in range(len(self.triangles)):
            for e in range(3):
                yield (t, e)

    def edge_pairs(self) -> list[tuple[HalfEdge, HalfEdge]]:
        return sorted((h, p) for h, p in self.gluing.items() if h < p)

    def triangle_area(self, t: int) -> Quad:
        a, b, c = self.triangles[t]
        return ((b - a).cross(c - a)) / 2

    def area(self) -> Quad:
        total = self.field.zero
        for t in range(len(self.triangles)):
            total = total + self.triangle_area(t)
        return total

    def copy(self) -> "TriangulatedSurface":
        return TriangulatedSurface(self.triangles, self.gluing, self.disc, self.name, validate=False)

    def __eq__(self, other):
        if not isinstance(other, TriangulatedSurface):
            return NotImplemented
        return (self.disc == other.disc and self.triangles == other.triangles
                and self.gluing == other.gluing)

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<TriangulatedSurface{label}: {len(self.triangles)} triangles over Q(sqrt({self.disc}))>"

    def apply_matrix(self, g: Mat2) -> "TriangulatedSurface":
        """Act linearly on every triangle; the gluing is unchanged."""
        det = g.det()
        if not det:
            raise ValueError("cannot apply a singular matrix")
        if det > 0:
            tris = [tuple(g @ v for v in tri) for tri in self.triangles]
            return TriangulatedSurface(tris, self.gluing, self.disc, self.name, validate=False)
        raise ValueError("orientation-reversing matrices are not supported")

    # -- vertices and cone angles ----------------------------------------------

    def vertex_classes(self) -> list[list[tuple[int, int]]]:
        """Corners ``(t, k)`` grouped by the surface vertex they sit at, in ccw order."""
        seen: set[tuple[int, int]] = set()
        classes = []
        for t in range(len(self.triangles)):
            for k in range(3):
                if (t, k) in seen:
                    continue
                corners = self._corners_around(t, k)
                seen.update(corners)
                classes.append(corners)
        return classes

    def _corners_around(self, t: int, k: int) -> list[tuple[int, int]]:
        corners = []
        cur = (t, k)
        while True:
            corners.append(cur)
            # rotate ccw: cross the edge entering this corner, i.e. edge k-1
            tt, kk = cur
            pt, pe = self.gluing[(tt, (kk - 1) % 3)]
            # partner edge pe runs from the partner's corner pe to pe+1; our vertex is its start
            cur = (pt, pe)
            if cur == corners[0]:
                return corners
            if len(corners) > 3 * len(self.triangles):
                raise ValidationError("corner walk did not close", where=(t, k))

    def cone_angle_turns(self, corners: Sequence[tuple[int, int]]) -> int:
        """Total angle at a vertex class, in units of 2*pi."""
        turns = 0
        for (t, k) in corners:
            tri = self.triangles[t]
            out_edge = tri[(k + 1) % 3] - tri[k]
            in_edge = tri[(k - 1) % 3] - tri[k]
            if _pseudo_angle(in_edge) < _pseudo_angle(out_edge):
                turns += 1
        return turns

    def cone_angles(self) -> list[int]:
        return [self.cone_angle_turns(c) for c in self.vertex_classes()]

    def genus(self) -> int:
        excess = sum(a - 1 for a in self.cone_angles())
        return excess // 2 + 1

    # -- validation --------------------------------------------------------------

    def validate(self) -> None:
        n = len(self.triangles)
        if n == 0:
            raise ValidationError("surface has no triangles")
        for t, tri in enumerate(self.triangles):
            if len(tri) != 3:
                raise ValidationError("triangle must have three vertices", where=t)
            for v in tri:
                for c in (v.x, v.y):
                    if not isinstance(c, Quad) or c.d != self.disc:
                        raise ValidationError("vertex coordinate is not in the surface field", where=t)
            if orientation(*tri) <= 0:
                raise ValidationError("triangle is not positively oriented", where=t)
        for h in self.half_edges():
            if h not in self.gluing:
                raise ValidationError("unglued edge", where=h)
        if len(self.gluing) != 3 * n:
            raise ValidationError("gluing refers to edges that do not exist")
        for h, p in self.gluing.items():
            if p == h:
                raise ValidationError("edge glued to itself", where=h)
            if self.gluing.get(p) != h:
                raise ValidationError("gluing is not an involution", where=(h, p))
            if not (0 <= p[0] < n and 0 <= p[1] < 3):
                raise ValidationError("gluing target out of range", where=(h, p))
            if self.edge(*h) != -self.edge(*p):
                raise ValidationError("glued edges are not opposite vectors", where=(h, p))
        for corners in self.vertex_classes():
            if self.cone_angle_turns(corners) < 1:
                raise ValidationError("cone angle is not a positive multiple of 2*pi", where=corners[0])

    # -- point helpers -----------------------------------------------------------

    def contains(self, t: int, p: Vec) -> bool:
        return point_in_triangle(p, *self.triangles[t])

    def centroid(self, t: int) -> SurfacePoint:
        a, b, c = self.triangles[t]
        return SurfacePoint(t, (a + b + c) / 3)


def _pseudo_angle(v: Vec) -> "_AngleKey":
    """Key that orders directions by angle in [0, 2*pi) without leaving the field."""
    upper = v.y > 0 or (not v.y and v.x > 0)
    return _AngleKey(0 if upper else 1, v)


class _AngleKey:
    __slots__ = ("half", "v")

    def __init__(self, half, v):
        self.half = half
        self.v = v

    def __lt__(self, other):
        if self.half != other.half:
            return self.half < other.half
        return self.v.cross(other.v) > 0


# -- retriangulation histories -----------------------------------------------------


class FlipRecord(NamedTuple):
    """Two triangles re-cut along the other diagonal of their hinge.

    ``old`` and ``new`` hold the triangles in the common hinge frame, keyed by
    triangle index, together with the offset that takes local coordinates to
    hinge coordinates.
    """

    old: dict
    new: dict


def _move(point: SurfacePoint, src: dict, dst: dict) -> SurfacePoint:
    t, p = point
    if t not in src:
        return point
    _, off = src[t]
    q = p + off
    for nt, (tri, noff) in dst.items():
        if point_in_triangle(q, *tri):
            return SurfacePoint(nt, q - noff)
    raise RuntimeError("point fell outside a flipped hinge")


class History:
    """Sequence of linear maps and edge flips relating two triangulations.

    Points are transported forward (source to target) or backward.
    """

    def __init__(self, steps: Optional[list] = None):
        self.steps: list = list(steps or [])

    def add_matrix(self, g: Mat2) -> None:
        self.steps.append(("M", g, None))

    def add_flip(self, record: FlipRecord) -> None:
        self.steps.append(("F", record, None))

    def __add__(self, other: "History") -> "History":
        return History(self.steps + other.steps)

    def __len__(self):
        return len(self.steps)

    def flip_count(self) -> int:
        return sum(1 for s in self.steps if s[0] == "F")

    def forward(self, point: SurfacePoint) -> SurfacePoint:
        for kind, obj, _ in self.steps:
            if kind == "M":
                point = SurfacePoint(point.tri, obj @ point.coords)
            else:
                point = _move(point, obj.old, obj.new)
        return point

    def backward(self, point: SurfacePoint) -> SurfacePoint:
        for i in range(len(self.steps) - 1, -1, -1):
            kind, obj, inv = self.steps[i]
            if kind == "M":
                if inv is None:
                    inv = obj.inverse()
                    self.steps[i] = (kind, obj, inv)
                point = SurfacePoint(point.tri, inv @ point.coords)
            else:
                point = _move(point, obj.new, obj.old)
        return point


# -- canonical points ----------------------------------------------------------------


def _edge_flags(s: TriangulatedSurface, t: int, p: Vec) -> list[int]:
    """Orientation of p against each edge of triangle t (0 = on the edge's line)."""
    a, b, c = s.triangles[t]
    return [orientation(a, b, p), orientation(b, c, p), orientation(c, a, p)]


def point_representations(s: TriangulatedSurface, p: SurfacePoint) -> list[SurfacePoint]:
    """Every (triangle, coords) pair naming the same geometric point."""
    t, q = p
    flags = _edge_flags(s, t, q)
    if min(flags) < 0:
        raise ValueError(f"coordinates lie outside triangle {t}")
    zeros = [e for e in range(3) if flags[e] == 0]
    if not zeros:
        return [p]
    if len(zeros) == 1:
        e = zeros[0]
        tri = s.triangles[t]
        pt, pe = s.gluing[(t, e)]
        ptri = s.triangles[pt]
        other = SurfacePoint(pt, ptri[(pe + 1) % 3] + (q - tri[e]))
        return [p, other]
    # edges k-1 and k meet at vertex k
    z = set(zeros)
    k = next(c for c in range(3) if c in z and (c - 1) % 3 in z)
    return [SurfacePoint(ct, s.triangles[ct][ck]) for ct, ck in s._corners_around(t, k)]


def canonical_point(p: SurfacePoint, s: TriangulatedSurface) -> SurfacePoint:
    """Lexicographically least representative of ``p``."""
    reps = point_representations(s, p)
    if len(reps) == 1:
        return reps[0]
    return min(reps, key=lambda r: (r.tri, r.coords.x, r.coords.y))


def is_vertex(s: TriangulatedSurface, p: SurfacePoint) -> bool:
    flags = _edge_flags(s, p.tri, p.coords)
    return sum(1 for f in flags if f == 0) >= 2


# -- straight-line tracing -----------------------------------------------------------


class Piece(NamedTuple):
    tri: int
    start: Vec
    end: Vec


def _start_triangle(s: TriangulatedSurface, p: SurfacePoint, w: Vec) -> SurfacePoint:
    """A representative of p whose closed triangle contains p + eps*w."""
    for rep in point_representations(s, p):
        t, q = rep
        tri = s.triangles[t]
        ok = True
        for e in range(3):
            a, b = tri[e], tri[(e + 1) % 3]
            if orientation(a, b, q) == 0 and (b - a).cross(w) < 0:
                ok = False
                break
        if ok:
            return rep
    raise ValueError("no triangle admits the requested direction")


def trace_segment(s: TriangulatedSurface, start: SurfacePoint, w: Vec,
                  max_steps: int = 100000) -> tuple[list[Piece], SurfacePoint]:
    """Flow straight from ``start`` by the vector ``w``.

    Returns the pieces crossed (in triangle frames) and the end point.  The
    path may end at a cone point; passing through one is only allowed when
    its angle is 2*pi.  Starting at a cone point of larger angle is
    ambiguous and rejected by the caller's choice of start point.
    """
    if w.is_zero():
        return [], start
    cur = _start_triangle(s, start, w)
    pieces: list[Piece] = []
    rem = w
    for _ in range(max_steps):
        t, p = cur
        tri = s.triangles[t]
        best = None
        exits = []
        for e in range(3):
            a, b = tri[e], tri[(e + 1) % 3]
            edge = b - a
            c = edge.cross(rem)
            if c < 0:
                f = edge.cross(p - a)
                sv = f / (-c)
                if best is None or sv < best:
                    best = sv
                    exits = [e]
                elif sv == best:
                    exits.append(e)
        if best is None or best >= 1:
            end = p + rem
            pieces.append(Piece(t, p, end))
            return pieces, SurfacePoint(t, end)
        q = p + rem * best
        pieces.append(Piece(t, p, q))
        rem = rem * (1 - best)
        if len(exits) == 1 and all(q != v for v in tri):
            e = exits[0]
            pt, pe = s.gluing[(t, e)]
            ptri = s.triangles[pt]
            cur = SurfacePoint(pt, ptri[(pe + 1) % 3] + (q - tri[e]))
            continue
        # through a vertex
        k = next(k for k in range(3) if tri[k] == q)
        if s.cone_angle_turns(s._corners_around(t, k)) != 1:
            raise ValueError("straight path runs into a cone point")
        cur = _start_triangle(s, SurfacePoint(t, q), rem)
    raise RuntimeError("trace_segment exceeded its step cap")
