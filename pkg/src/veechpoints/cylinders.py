"""Cylinder decompositions, parabolic elements and horizontal x vertical regions.

A decomposition is computed in a normalized frame where the cylinder
direction is horizontal.  Each cylinder is developed as a strip
``[0, c) x [0, h]``: triangles are laid out left to right across their
non-horizontal edges, and the x-positions of vertices on either boundary cut
the strip into regions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .delaunay import DEFAULT_MAX_CONTRACTIONS, direction_normalizer, refine_to_direction
from .errors import NotVeechData
from .geom import Mat2, Vec, point_in_triangle
from .numfield import Quad, lcm_rationals
from .surface import History, SurfacePoint, TriangulatedSurface, canonical_point

__all__ = [
    "Cylinder",
    "CylinderDecomposition",
    "StripRegion",
    "Region",
    "RegionOccurrence",
    "decompose",
    "regions",
    "shear_images",
    "check_nonsquare_tiled",
    "mod_positive",
]


def mod_positive(x, c):
    """``x`` reduced into ``[0, c)`` for a positive field element ``c``."""
    return x - c * (x / c).__floor__()


@dataclass
class Cylinder:
    index: int
    triangles: list[int]
    circumference: Quad
    height: Quad
    offsets: dict = field(repr=False, default_factory=dict)   # tri -> strip offset (normalized frame)
    cuts: list = field(repr=False, default_factory=list)      # sorted boundary vertex positions in [0, c)
    multiplicity: int = 0

    @property
    def modulus(self) -> Quad:
        return self.height / self.circumference

    @property
    def area(self) -> Quad:
        return self.circumference * self.height


@dataclass
class StripRegion:
    """A rectangle ``[x, x + width] x [0, h]`` cut out of one cylinder's strip."""

    cylinder: int
    x: Quad
    width: Quad
    height: Quad
    center: SurfacePoint     # on the normalized refined surface


@dataclass
class CylinderDecomposition:
    direction: Vec
    normalizer: Mat2                 # takes ``direction`` to the x-axis
    surface: TriangulatedSurface     # refined, original frame
    history: History                 # original surface -> refined surface
    normalized: TriangulatedSurface  # refined, normalized frame
    cylinders: list[Cylinder]
    t: Quad
    parabolic: Mat2
    strip_regions: list[StripRegion] = field(default_factory=list)

    def to_json(self) -> dict:
        def q(x):
            return x.to_ints()
        return {
            "direction": [q(self.direction.x), q(self.direction.y)],
            "t": q(self.t),
            "parabolic": [[q(v) for v in row] for row in self.parabolic.rows()],
            "cylinders": [
                {"triangles": c.triangles, "circumference": q(c.circumference),
                 "height": q(c.height), "modulus": q(c.modulus), "multiplicity": c.multiplicity}
                for c in self.cylinders
            ],
        }


def _horizontal_cylinders(n: TriangulatedSurface) -> list[list[int]]:
    parent = list(range(len(n)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (t, e), (u, _) in n.edge_pairs():
        if n.edge(t, e).y:
            parent[find(t)] = find(u)
    groups: dict[int, list[int]] = {}
    for t in range(len(n)):
        groups.setdefault(find(t), []).append(t)
    return sorted(groups.values(), key=min)


def _triangle_span(tri):
    ys = [v.y for v in tri]
    return min(ys), max(ys)


def _develop_strip(n: TriangulatedSurface, tris: list[int]):
    """Lay a horizontal cylinder out left to right; returns (offsets, c, h)."""
    t0 = tris[0]
    lo, hi = _triangle_span(n.triangles[t0])
    h = hi - lo
    zero = lo - lo
    offsets = {t0: Vec(zero, -lo)}
    cur = t0
    while True:
        tri = n.triangles[cur]
        tlo, thi = _triangle_span(tri)
        if thi - tlo != h:
            raise RuntimeError("triangle does not span its cylinder")
        best = None
        for e in range(3):
            a, b = tri[e], tri[(e + 1) % 3]
            if a.y == b.y:
                continue
            mid = a.x + b.x
            if best is None or mid > best[0]:
                best = (mid, e)
        e = best[1]
        u, f = n.gluing[(cur, e)]
        off = tri[(e + 1) % 3] + offsets[cur] - n.triangles[u][f]
        if u == t0:
            shift = off - offsets[t0]
            if shift.y or shift.x <= 0:
                raise RuntimeError("strip development did not close up")
            c = shift.x
            break
        if u in offsets:
            raise RuntimeError("strip development revisited a triangle")
        offsets[u] = off
        cur = u
    if set(offsets) != set(tris):
        raise RuntimeError("strip development missed triangles of the cylinder")
    return offsets, c, h


def decompose(s: TriangulatedSurface, v: Vec,
              max_contractions: int = DEFAULT_MAX_CONTRACTIONS) -> CylinderDecomposition:
    """Cylinder decomposition of ``s`` in the periodic direction ``v``."""
    K = s.field
    v = Vec(v.x + K.zero, v.y + K.zero)
    refined, hist = refine_to_direction(s, v, max_contractions)
    M = direction_normalizer(v)
    n = refined.apply_matrix(M)
    cylinders = []
    for i, tris in enumerate(_horizontal_cylinders(n)):
        offsets, c, h = _develop_strip(n, tris)
        area = K.zero
        for t in tris:
            area = area + n.triangle_area(t)
        if area != c * h:
            raise RuntimeError("cylinder area does not match circumference times height")
        cuts = set()
        for t in tris:
            for p in n.triangles[t]:
                cuts.add(mod_positive(p.x + offsets[t].x, c))
        cylinders.append(Cylinder(i, sorted(tris), c, h, offsets, sorted(cuts)))

    inv = [cyl.circumference / cyl.height for cyl in cylinders]
    ratios = [r / inv[0] for r in inv]
    if not all(q.is_rational() for q in ratios):
        raise NotVeechData(f"cylinder moduli in direction {v} are not commensurable")
    t = inv[0] * lcm_rationals(q.a for q in ratios)
    for cyl, r in zip(cylinders, inv):
        k = t / r
        if not k.is_rational() or k.a.denominator != 1 or k.a <= 0:
            raise RuntimeError("multiplicity is not a positive integer")
        cyl.multiplicity = int(k.a)
    one, zero = K.one, K.zero
    parabolic = M.inverse() @ Mat2(one, t, zero, one) @ M
    dec = CylinderDecomposition(v, M, refined, hist, n, cylinders, t, parabolic)
    dec.strip_regions = _strip_regions(dec)
    return dec


def _locate_in_strip(n: TriangulatedSurface, cyl: Cylinder, p: Vec) -> SurfacePoint:
    c = cyl.circumference
    xs = [v.x + cyl.offsets[t].x for t in cyl.triangles for v in n.triangles[t]]
    left, right = min(xs), max(xs)
    q = Vec(left + mod_positive(p.x - left, c), p.y)
    while q.x <= right:
        for t in cyl.triangles:
            loc = q - cyl.offsets[t]
            if point_in_triangle(loc, *n.triangles[t]):
                return SurfacePoint(t, loc)
        q = Vec(q.x + c, q.y)
    raise RuntimeError("point not found in the cylinder strip")


def _strip_regions(dec: CylinderDecomposition) -> list[StripRegion]:
    out = []
    for cyl in dec.cylinders:
        cuts = cyl.cuts
        c = cyl.circumference
        for i, x in enumerate(cuts):
            nxt = cuts[i + 1] if i + 1 < len(cuts) else cuts[0] + c
            w = nxt - x
            center = _locate_in_strip(dec.normalized, cyl, Vec(x + w / 2, cyl.height / 2))
            out.append(StripRegion(cyl.index, x, w, cyl.height, center))
    return out


@dataclass
class Region:
    """Component of (horizontal cylinder) x (vertical cylinder).

    Region coordinates put the lower left corner at the origin; ``x_in_h`` is
    the left edge's position in the horizontal strip and ``y_in_v`` the
    bottom edge's position along the vertical cylinder.
    """

    index: int
    hcyl: int
    vcyl: int
    width: Quad
    height: Quad
    x_in_h: Quad
    y_in_v: Quad
    center: SurfacePoint     # canonical, on the fixed surface

    @property
    def area(self) -> Quad:
        return self.width * self.height


@dataclass(frozen=True)
class RegionOccurrence:
    target: int
    offset: Quad


def _center_on(dec: CylinderDecomposition, sr: StripRegion, fixed: TriangulatedSurface,
               fixed_hist: History) -> SurfacePoint:
    p = SurfacePoint(sr.center.tri, dec.normalizer.inverse() @ sr.center.coords)
    p = dec.history.backward(p)
    p = fixed_hist.forward(p)
    return canonical_point(p, fixed)


def regions(hd: CylinderDecomposition, vd: CylinderDecomposition,
            fixed: TriangulatedSurface, fixed_hist: History) -> list[Region]:
    """Match horizontal and vertical strip regions through their centers.

    ``fixed`` is the triangulation points are reported on and ``fixed_hist``
    carries points of the original surface onto it.
    """
    vcenters = {}
    for sr in vd.strip_regions:
        vcenters[_center_on(vd, sr, fixed, fixed_hist)] = sr
    out = []
    for i, sr in enumerate(hd.strip_regions):
        cen = _center_on(hd, sr, fixed, fixed_hist)
        vr = vcenters.get(cen)
        if vr is None:
            raise RuntimeError("horizontal and vertical regions do not match up")
        # vertical strip region: its width is the horizontal cylinder height and
        # its height is the vertical cylinder's width
        if vr.width != sr.height or vr.height != sr.width:
            raise RuntimeError("region dimensions disagree between the two directions")
        # normalized vertical frame is the quarter turn (x, y) -> (y, -x): strip x is the
        # original y, so the bottom edge sits at vr.x
        out.append(Region(i, sr.cylinder, vr.cylinder, sr.width, sr.height, sr.x, vr.x, cen))
    if len(out) != len(vd.strip_regions):
        raise RuntimeError("region counts disagree between the two directions")
    return out


def shear_images(dec: CylinderDecomposition, regs: list[Region], r: Region,
                 vertical: bool = False) -> list[RegionOccurrence]:
    """Where the parabolic of ``dec`` can send points of ``r``.

    Occurrences of every region ``r'`` of the same cylinder in the strip of
    ``k + 1`` copies of the cylinder, offset from the leading edge of ``r``
    (left edge for the horizontal direction, bottom edge for the vertical).
    """
    cyl_of = (lambda q: q.vcyl) if vertical else (lambda q: q.hcyl)
    pos_of = (lambda q: q.y_in_v) if vertical else (lambda q: q.x_in_h)
    cyl = dec.cylinders[cyl_of(r)]
    c = cyl.circumference
    out = []
    for rp in regs:
        if cyl_of(rp) != cyl_of(r):
            continue
        d0 = mod_positive(pos_of(rp) - pos_of(r), c)
        for j in range(cyl.multiplicity + 1):
            out.append(RegionOccurrence(rp.index, d0 + c * j))
    return out


def check_nonsquare_tiled(s: TriangulatedSurface, hd: CylinderDecomposition,
                          vd: CylinderDecomposition) -> bool:
    """True iff the product of the two parabolic shear magnitudes is irrational."""
    return not (hd.t * vd.t).is_rational()

