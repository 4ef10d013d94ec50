"""Hyperbolic element selection and the finite candidate point set.

Segments of S live in region coordinates.  They are placed on the fixed
triangulation by tracing from the region center to the segment midpoint and
then out to both ends; the image of a segment under the affine map with
derivative g is traced the same way from the image of its midpoint.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .constraints import CandidateSegment
from .cylinders import Region
from .errors import CapExceeded
from .geom import Mat2, Segment, Vec, intersect_segments, is_eigendirection
from .isomorphism import AffineMap
from .surface import (Piece, SurfacePoint, TriangulatedSurface, canonical_point,
                      point_representations, trace_segment)

__all__ = [
    "SurfaceSegment",
    "segment_directions",
    "choose_hyperbolic",
    "separating_power",
    "place_segments",
    "candidate_points",
    "DEFAULT_MAX_A",
    "DEFAULT_MAX_N",
]

DEFAULT_MAX_A = 1000
DEFAULT_MAX_N = 1000


@dataclass
class SurfaceSegment:
    """A straight segment on the surface given by its midpoint and half-vector."""

    mid: SurfacePoint
    half: Vec
    pieces: list

    @property
    def direction(self) -> Vec:
        return self.half


def segment_directions(segs: Iterable[CandidateSegment]) -> list[Vec]:
    """One representative per distinct direction of the non-point segments."""
    dirs: list[Vec] = []
    for cs in segs:
        if cs.is_point:
            continue
        d = cs.segment.direction()
        if not any(not d.cross(e) for e in dirs):
            dirs.append(d)
    return dirs


def choose_hyperbolic(dirs: Sequence[Vec], m_h: Mat2, m_v: Mat2,
                      max_a: int = DEFAULT_MAX_A) -> tuple[Mat2, int]:
    """Smallest ``a`` with ``M_H^a M_V^a`` hyperbolic and no direction an eigendirection."""
    for a in range(1, max_a + 1):
        g0 = (m_h ** a) @ (m_v ** a)
        if g0.trace() <= 2 and g0.trace() >= -2:
            continue
        if any(is_eigendirection(g0, d) for d in dirs):
            continue
        return g0, a
    raise CapExceeded(f"no suitable hyperbolic element with a <= {max_a}")


def separating_power(g0: Mat2, dirs: Sequence[Vec], max_n: int = DEFAULT_MAX_N) -> int:
    """Smallest ``n`` such that no ``g0^n d`` is parallel to any direction in ``dirs``."""
    g = g0
    for n in range(1, max_n + 1):
        images = [g @ d for d in dirs]
        if not any(not u.cross(d) for u in images for d in dirs):
            return n
        g = g @ g0
    raise CapExceeded(f"no separating power n <= {max_n}")


def _trace_through(s: TriangulatedSurface, mid: SurfacePoint, half: Vec) -> list[Piece]:
    fwd, _ = trace_segment(s, mid, half)
    back, _ = trace_segment(s, mid, -half)
    return fwd + back


def place_segments(fixed: TriangulatedSurface, regs: Sequence[Region],
                   segs: Iterable[CandidateSegment]) -> tuple[list[SurfaceSegment], list[SurfacePoint]]:
    """Put region-coordinate segments on the fixed triangulation.

    Returns the proper segments and, separately, the canonical points of the
    one-point segments.
    """
    placed: list[SurfaceSegment] = []
    points: list[SurfacePoint] = []
    for cs in segs:
        r = regs[cs.region]
        center = Vec(r.width / 2, r.height / 2)
        seg = cs.segment
        mid_local = (seg.p + seg.q) / 2
        _, mid = trace_segment(fixed, r.center, mid_local - center)
        if cs.is_point:
            points.append(canonical_point(mid, fixed))
            continue
        half = (seg.q - seg.p) / 2
        placed.append(SurfaceSegment(mid, half, _trace_through(fixed, mid, half)))
    return placed, points


def image_segment(fixed: TriangulatedSurface, f: AffineMap, seg: SurfaceSegment) -> SurfaceSegment:
    mid = f(seg.mid)
    half = f.g @ seg.half
    return SurfaceSegment(mid, half, _trace_through(fixed, mid, half))


def _bucket(segs: Iterable[SurfaceSegment]) -> dict:
    out = defaultdict(list)
    for s in segs:
        for pc in s.pieces:
            if pc.start != pc.end:
                out[pc.tri].append(pc)
    return out


def _box(pc: Piece):
    xs = (float(pc.start.x), float(pc.end.x))
    ys = (float(pc.start.y), float(pc.end.y))
    return min(xs), max(xs), min(ys), max(ys)


def _boxes_may_meet(b1, b2, slack: float = 1e-9) -> bool:
    # float prefilter only; every surviving pair is decided exactly
    return not (b1[1] + slack < b2[0] or b2[1] + slack < b1[0]
                or b1[3] + slack < b2[2] or b2[3] + slack < b1[2])


def intersect_families(fixed: TriangulatedSurface, a: Iterable[SurfaceSegment],
                       b: Iterable[SurfaceSegment]) -> set[SurfacePoint]:
    """Canonical points where a segment of ``a`` meets a segment of ``b``."""
    ba, bb = _bucket(a), _bucket(b)
    out: set[SurfacePoint] = set()
    for tri, pa in ba.items():
        pb = bb.get(tri)
        if not pb:
            continue
        boxes_b = [(_box(q), q) for q in pb]
        for p in pa:
            box = _box(p)
            sp = Segment(p.start, p.end)
            for bq, q in boxes_b:
                if not _boxes_may_meet(box, bq):
                    continue
                hit = intersect_segments(sp, Segment(q.start, q.end))
                if hit is None:
                    continue
                if isinstance(hit, Segment):
                    raise RuntimeError("transported segment overlaps an original segment")
                out.add(canonical_point(SurfacePoint(tri, hit), fixed))
    return out


def _on_family(fixed: TriangulatedSurface, p: SurfacePoint, bucket: dict) -> bool:
    for rep in point_representations(fixed, p):
        for pc in bucket.get(rep.tri, ()):
            if intersect_segments(Segment(rep.coords, rep.coords), Segment(pc.start, pc.end)) is not None:
                return True
    return False


def vertex_points(s: TriangulatedSurface) -> list[SurfacePoint]:
    return [canonical_point(SurfacePoint(t, s.triangles[t][k]), s) for t, k in
            (corners[0] for corners in s.vertex_classes())]


def candidate_points(fixed: TriangulatedSurface, segs: Sequence[SurfaceSegment],
                     seg_points: Sequence[SurfacePoint], f: AffineMap,
                     image_segs: Optional[Sequence[SurfaceSegment]] = None) -> set[SurfacePoint]:
    """Finite set containing every periodic point: the one-point segments, the
    crossings of S with its image under ``f``, images of the one-point
    segments that land on S, and the vertices."""
    if image_segs is None:
        image_segs = [image_segment(fixed, f, sg) for sg in segs]
    out = set(seg_points)
    out |= intersect_families(fixed, segs, image_segs)
    bucket = _bucket(segs)
    for p in seg_points:
        q = f(p)
        if _on_family(fixed, q, bucket):
            out.add(q)
    out.update(vertex_points(fixed))
    return out
