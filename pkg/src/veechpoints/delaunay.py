"""Delaunay maintenance by edge flips and refinement toward a periodic direction."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import CapExceeded, NotPeriodicDirection
from .geom import DegenerateGeometry, Mat2, Vec, incircle, orientation
from .numfield import sign
from .surface import FlipRecord, History, TriangulatedSurface

__all__ = [
    "Hinge",
    "HingeState",
    "hinge",
    "hinges",
    "is_locally_delaunay",
    "is_eternally_delaunay",
    "flip_hinge",
    "make_delaunay",
    "refine_to_direction",
    "direction_normalizer",
    "has_edge_parallel",
    "DEFAULT_MAX_CONTRACTIONS",
]

DEFAULT_MAX_CONTRACTIONS = 64


class HingeState(Enum):
    STRICT = "strict"
    DEGENERATE = "degenerate"
    VIOLATED = "violated"


@dataclass(frozen=True)
class Hinge:
    """Two triangles sharing an edge, developed into the first triangle's frame.

    The shared edge runs from ``O`` to ``P2``; ``P3`` is the far vertex of
    ``t1`` and ``P1`` the far vertex of ``t2``, so ``O, P1, P2, P3`` is the
    counterclockwise boundary of the quadrilateral.
    """

    t1: int
    e1: int
    t2: int
    e2: int
    O: Vec
    P1: Vec
    P2: Vec
    P3: Vec

    @property
    def offset2(self) -> Vec:
        """Translation taking t2's frame into t1's."""
        return self.P2 - self._b_start

    _b_start: Optional[Vec] = None


def hinge(s: TriangulatedSurface, t1: int, e1: int) -> Hinge:
    t2, e2 = s.gluing[(t1, e1)]
    A = s.triangles[t1]
    B = s.triangles[t2]
    O, Q, R = A[e1], A[(e1 + 1) % 3], A[(e1 + 2) % 3]
    off = Q - B[e2]
    S = B[(e2 + 2) % 3] + off
    return Hinge(t1, e1, t2, e2, O, S, Q, R, B[e2])


def hinges(s: TriangulatedSurface) -> list[Hinge]:
    """One hinge per glued edge pair, in a fixed order."""
    return [hinge(s, *h) for h, _ in s.edge_pairs()]


def is_locally_delaunay(h: Hinge) -> HingeState:
    v = incircle(h.O, h.P2, h.P3, h.P1)
    if v > 0:
        return HingeState.VIOLATED
    return HingeState.DEGENERATE if v == 0 else HingeState.STRICT


def _flow_coefficients(h: Hinge):
    """Split the incircle determinant under ``x -> s x, y -> y / s`` into ``s^2 A + s^-2 B``."""
    rows = [(p.x - h.P1.x, p.y - h.P1.y) for p in (h.O, h.P2, h.P3)]

    def det(col):
        (x0, y0), (x1, y1), (x2, y2) = rows
        c0, c1, c2 = (col(x, y) for x, y in rows)
        return (x0 * (y1 * c2 - c1 * y2) - y0 * (x1 * c2 - c1 * x2) + c0 * (x1 * y2 - y1 * x2))

    return det(lambda x, y: x * x), det(lambda x, y: y * y)


def is_eternally_delaunay(h: Hinge) -> bool:
    """Does the hinge stay locally Delaunay under ``diag(e^-t, e^t)`` for all t >= 0?

    With ``u = e^{4t} >= 1`` the incircle value is a positive multiple of
    ``A + u B``; it is nonpositive on ``u >= 1`` iff ``A + B <= 0`` and ``B <= 0``.
    """
    if orientation(h.O, h.P2, h.P3) <= 0:
        raise DegenerateGeometry("hinge triangle is not positively oriented")
    A, B = _flow_coefficients(h)
    return sign(A + B) <= 0 and sign(B) <= 0


def _flip_in_place(s: TriangulatedSurface, t1: int, e1: int) -> FlipRecord:
    h = hinge(s, t1, e1)
    t2, e2 = h.t2, h.e2
    P, S, Q, R = h.O, h.P1, h.P2, h.P3
    if orientation(S, Q, R) <= 0 or orientation(R, P, S) <= 0:
        raise DegenerateGeometry(f"hinge at {(t1, e1)} is not strictly convex")
    off2 = Q - h._b_start
    zero = P - P
    old = {t1: (tuple(s.triangles[t1]), zero),
           t2: (tuple(v + off2 for v in s.triangles[t2]), off2)}
    new1 = (zero, Q - S, R - S)
    new2 = (zero, P - R, S - R)
    new = {t1: ((S, Q, R), S), t2: ((R, P, S), R)}

    remap = {
        (t2, (e2 + 2) % 3): (t1, 0),
        (t1, (e1 + 1) % 3): (t1, 1),
        (t1, (e1 + 2) % 3): (t2, 0),
        (t2, (e2 + 1) % 3): (t2, 1),
    }
    g = s.gluing
    partners = {old_h: g[old_h] for old_h in remap}
    for k in range(3):
        g.pop((t1, k), None)
        g.pop((t2, k), None)
    for old_h, new_h in remap.items():
        p = partners[old_h]
        p = remap.get(p, p)
        g[new_h] = p
        g[p] = new_h
    g[(t1, 2)] = (t2, 2)
    g[(t2, 2)] = (t1, 2)
    s.triangles[t1] = new1
    s.triangles[t2] = new2
    return FlipRecord(old, new)


def flip_hinge(s: TriangulatedSurface, t1: int, e1: int) -> TriangulatedSurface:
    """Re-cut the hinge across edge ``(t1, e1)`` along its other diagonal.

    The result reuses indices ``t1`` and ``t2``; the new diagonal is edge 2
    of both.
    """
    out = s.copy()
    _flip_in_place(out, t1, e1)
    return out


def make_delaunay(s: TriangulatedSurface, max_flips: int = 100000) -> tuple[TriangulatedSurface, History]:
    """Flip violated hinges until none remain.

    Degenerate hinges are left alone.  Returns the new surface and the flip
    history relating it to ``s``.
    """
    out = s.copy()
    hist = History()
    queue = deque(h for h, _ in s.edge_pairs())
    queued = set(queue)
    flips = 0
    while queue:
        he = queue.popleft()
        queued.discard(he)
        t, e = he
        if is_locally_delaunay(hinge(out, t, e)) is not HingeState.VIOLATED:
            continue
        t2 = out.gluing[he][0]
        hist.add_flip(_flip_in_place(out, t, e))
        flips += 1
        if flips > max_flips:
            raise CapExceeded(f"make_delaunay exceeded {max_flips} flips")
        for tt in (t, t2):
            for k in (0, 1):
                nh = (tt, k)
                key = min(nh, out.gluing[nh])
                if key not in queued:
                    queued.add(key)
                    queue.append(key)
    return out, hist


def has_edge_parallel(s: TriangulatedSurface, t: int, v: Vec) -> bool:
    return any(not e.cross(v) for e in s.edges(t))


def direction_normalizer(v: Vec) -> Mat2:
    """An SL2 matrix taking direction ``v`` to the positive or negative x-axis."""
    if v.is_zero():
        raise DegenerateGeometry("direction must be nonzero")
    one = v.x * 0 + v.y * 0 + 1
    zero = one - one
    if not v.x:
        return Mat2(zero, one, -one, zero)
    return Mat2(one, zero, -v.y / v.x, one)


def refine_to_direction(s: TriangulatedSurface, v: Vec,
                        max_contractions: int = DEFAULT_MAX_CONTRACTIONS,
                        return_contracted: bool = False):
    """Triangulate ``s`` so that every triangle has an edge parallel to ``v``.

    The direction is moved to horizontal, then the surface is contracted by
    ``diag(1/2, 2)`` and made Delaunay until every triangle has a horizontal
    edge; the contraction and normalization are undone on the result.
    Returns ``(surface, history)`` where ``history`` carries points of ``s``
    to the refined surface.  With ``return_contracted`` the contracted
    Delaunay surface is appended to the tuple.
    """
    K = s.field
    one, zero = K.one, K.zero
    M = direction_normalizer(Vec(v.x + zero, v.y + zero))
    horiz = Vec(one, zero)
    hist = History()
    cur = s.apply_matrix(M)
    hist.add_matrix(M)
    cur, h = make_delaunay(cur)
    hist = hist + h
    shrink = Mat2(one / 2, zero, zero, 2 * one)
    k = 0
    while not all(has_edge_parallel(cur, t, horiz) for t in range(len(cur))):
        if k >= max_contractions:
            raise NotPeriodicDirection(
                f"no refinement along {v} after {max_contractions} contractions")
        cur = cur.apply_matrix(shrink)
        hist.add_matrix(shrink)
        cur, h = make_delaunay(cur)
        hist = hist + h
        k += 1
    contracted = cur
    undo = Mat2(one * 2 ** k, zero, zero, one / 2 ** k)
    back = M.inverse() @ undo
    cur = cur.apply_matrix(back)
    hist.add_matrix(back)
    if return_contracted:
        return cur, hist, contracted
    return cur, hist
