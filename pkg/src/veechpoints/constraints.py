"""Rationality constraints on periodic points and their reduction to lines.

In region coordinates a periodic point (x, y) of a region R inside the
horizontal cylinder H and vertical cylinder V has rational height in both:
``y / h_H`` and ``x / h_V`` are rational.  The horizontal parabolic moves it to
``x + t*y - d`` inside some region R' at offset d, which must again be at
rational height in R' (width ``h_V'``).  Three ``ax + by + c in Q`` conditions
over a quadratic field collapse to one linear equation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cylinders import CylinderDecomposition, Region, RegionOccurrence, shear_images
from .geom import Line, Segment, Vec, clip_segment_to_band, line_clip_to_polygon
from .errors import SquareTiledUnsupported
from .numfield import Quad, rational_projection

__all__ = [
    "ConstraintPoly",
    "ReducedLine",
    "CandidateSegment",
    "DegenerateReduction",
    "region_constraints",
    "constraint_reduce",
    "candidate_segments",
    "shear_direction",
]


class DegenerateReduction(RuntimeError):
    """A reduction came out identically zero, so it says nothing about the region."""


@dataclass(frozen=True)
class ConstraintPoly:
    """``a*x + b*y + c`` is rational at every periodic point."""

    a: Quad
    b: Quad
    c: Quad

    def __call__(self, p: Vec):
        return self.a * p.x + self.b * p.y + self.c


@dataclass(frozen=True)
class ReducedLine:
    """``a*x + b*y + c = 0``; when degenerate, ``certificate`` holds the rationals ``pi(m_i)``."""

    a: Quad
    b: Quad
    c: Quad
    certificate: tuple = ()

    @property
    def degenerate(self) -> bool:
        return not self.a and not self.b

    @property
    def infeasible(self) -> bool:
        """Degenerate with a nonzero constant: no point satisfies all three constraints."""
        return self.degenerate and bool(self.c)

    def line(self) -> Line:
        return Line(self.a, self.b, self.c)


@dataclass(frozen=True)
class CandidateSegment:
    region: int
    segment: Segment
    source: RegionOccurrence
    vertical: bool = False

    @property
    def is_point(self) -> bool:
        return self.segment.is_point()


def region_constraints(r: Region, occ: RegionOccurrence, dec: CylinderDecomposition,
                       regs: list[Region], vertical: bool = False
                       ) -> tuple[ConstraintPoly, ConstraintPoly, ConstraintPoly]:
    """The three rationality constraints for ``r`` and one shear occurrence.

    Horizontal: ``y/h_H``, ``x/h_V`` and ``(x + t_H*y - d)/h_V'``.  Vertical
    is the mirror image: ``x/h_V``, ``y/h_H`` and ``(y + t_V*x - d)/h_H'``,
    where ``t_V`` is the magnitude of the vertical parabolic.
    """
    h_h = r.height
    h_v = r.width
    t = dec.t
    zero = h_h - h_h
    if not vertical:
        h_vp = regs[occ.target].width
        q0 = ConstraintPoly(zero, 1 / h_h, zero)
        q1 = ConstraintPoly(1 / h_v, zero, zero)
        q2 = ConstraintPoly(1 / h_vp, t / h_vp, -occ.offset / h_vp)
    else:
        h_hp = regs[occ.target].height
        q0 = ConstraintPoly(1 / h_v, zero, zero)
        q1 = ConstraintPoly(zero, 1 / h_h, zero)
        q2 = ConstraintPoly(t / h_hp, 1 / h_hp, -occ.offset / h_hp)
    return q0, q1, q2


def _minors(q1: ConstraintPoly, q2: ConstraintPoly, q3: ConstraintPoly):
    m1 = q2.a * q3.b - q3.a * q2.b
    m2 = q3.a * q1.b - q1.a * q3.b
    m3 = q1.a * q2.b - q2.a * q1.b
    return m1, m2, m3


def _proj(x) -> Fraction:
    return rational_projection(x) if isinstance(x, Quad) else Fraction(x)


def constraint_reduce(q1: ConstraintPoly, q2: ConstraintPoly, q3: ConstraintPoly) -> ReducedLine:
    """One linear equation satisfied wherever all three constraints are rational.

    Expanding the determinant with rows ``(a_i, b_i, c_i - Q_i)`` along its
    last column gives ``sum m_i Q_i = sum m_i c_i`` at every (x, y).  When the
    ``Q_i`` take rational values, projecting onto the rational part keeps the
    identity, which is the returned line.
    """
    qs = (q1, q2, q3)
    ms = _minors(q1, q2, q3)
    ps = [_proj(m) for m in ms]
    zero = q1.a - q1.a
    d = zero
    for q, m in zip(qs, ms):
        d = d - q.c * m
    a = sum((p * q.a for p, q in zip(ps, qs)), zero)
    b = sum((p * q.b for p, q in zip(ps, qs)), zero)
    c = sum((p * q.c for p, q in zip(ps, qs)), zero) + _proj(d)
    cert = tuple(ps) if (not a and not b) else ()
    return ReducedLine(a, b, c, cert)


def _rectangle(w, h) -> list[Vec]:
    z = w - w
    return [Vec(z, z), Vec(w, z), Vec(w, h), Vec(z, h)]


def shear_direction(r: Region, hd: CylinderDecomposition, vd: CylinderDecomposition) -> bool:
    """False to shear horizontally in ``r``, True to shear vertically.

    Horizontal works when ``c_H / h_V`` is irrational, vertical when
    ``c_V / h_H`` is; on a surface that is not square-tiled one of them holds.
    """
    if not (hd.cylinders[r.hcyl].circumference / r.width).is_rational():
        return False
    if not (vd.cylinders[r.vcyl].circumference / r.height).is_rational():
        return True
    raise SquareTiledUnsupported(
        f"region {r.index}: both circumference/height ratios are rational")


def candidate_segments(hd: CylinderDecomposition, vd: CylinderDecomposition,
                       regs: list[Region]) -> list[CandidateSegment]:
    """Finite set of segments (in region coordinates) covering every periodic point.

    Each (region, occurrence) pair gives a line, clipped to the region and to
    the band where the occurrence applies.  An identically-zero reduction
    raises :class:`DegenerateReduction`.
    """
    out: list[CandidateSegment] = []
    seen = set()
    for r in regs:
        vertical = shear_direction(r, hd, vd)
        dec = vd if vertical else hd
        t = dec.t
        one = t - t + 1
        normal = Vec(t, one) if vertical else Vec(one, t)
        rect = _rectangle(r.width, r.height)
        for occ in shear_images(dec, regs, r, vertical):
            red = constraint_reduce(*region_constraints(r, occ, dec, regs, vertical))
            if red.infeasible:
                continue
            if red.degenerate:
                raise DegenerateReduction(
                    f"constraints for region {r.index} at offset {occ.offset} reduce to 0 = 0")
            clip = line_clip_to_polygon(red.line(), rect)
            if clip is None:
                continue
            seg = clip if isinstance(clip, Segment) else Segment(clip, clip)
            lo = occ.offset
            span = regs[occ.target].height if vertical else regs[occ.target].width
            banded = clip_segment_to_band(seg, normal, lo, lo + span)
            if banded is None:
                continue
            p, q = banded.p, banded.q
            if q < p:
                p, q = q, p
            key = (r.index, p, q)
            if key in seen:
                continue
            seen.add(key)
            out.append(CandidateSegment(r.index, Segment(p, q), occ, vertical))
    return out
