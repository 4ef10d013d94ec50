"""End-to-end periodic point computation.

1. cylinder decompositions in two periodic directions,
2. candidate segments from the rationality constraints,
3. intersection of the segments with their image under a hyperbolic element,
4. the orbit-graph filter.

The surface is first moved by an SL2 matrix so that the two directions are
horizontal and vertical; results are moved back at the end.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .constraints import CandidateSegment, candidate_segments
from .cylinders import CylinderDecomposition, Region, check_nonsquare_tiled, decompose, regions
from .delaunay import DEFAULT_MAX_CONTRACTIONS, make_delaunay
from .errors import NotInVeechGroup, NotPeriodicDirection, NotVeechData, SquareTiledUnsupported
from .geom import Mat2, Vec
from .isomorphism import AffineMap, delaunay_cells, find_translation_isomorphisms
from .orbit import OrbitResult, reduce_candidates, verify_orbits
from .serialize import mat_to_json, point_to_json
from .search import (DEFAULT_MAX_A, DEFAULT_MAX_N, SurfaceSegment, candidate_points,
                     choose_hyperbolic, place_segments, segment_directions, separating_power)
from .surface import History, SurfacePoint, TriangulatedSurface, canonical_point

__all__ = ["Pipeline", "PeriodicPoint", "choose_frame", "periodic_points"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PeriodicPoint:
    point: SurfacePoint
    singular: bool


def _edge_directions(s: TriangulatedSurface) -> list[Vec]:
    out = []
    for t in range(len(s)):
        out.extend(s.edges(t))
    return out


def choose_frame(s: TriangulatedSurface) -> Mat2:
    """SL2 matrix making two saddle connection directions horizontal and vertical.

    Horizontal and vertical edges are kept when present; otherwise the
    shortest edges of the Delaunay triangulation supply the directions.
    """
    K = s.field
    one, zero = K.one, K.zero
    d, _ = make_delaunay(s)
    edges = _edge_directions(d)
    horiz = [e for e in edges if not e.y]
    vert = [e for e in edges if not e.x]
    if horiz and vert:
        return Mat2(one, zero, zero, one)
    by_len = sorted(edges, key=lambda e: e.dot(e))
    u1 = horiz[0] if horiz else by_len[0]
    u2 = next(e for e in (vert or []) + by_len if e.cross(u1))
    det = u1.x * u2.y - u2.x * u1.y
    # B = [u1 u2]; diag(det, 1) B^-1 sends u1 to det*e1 and u2 to e2
    binv = Mat2(u2.y / det, -u2.x / det, -u1.y / det, u1.x / det)
    return Mat2(det, zero, zero, one) @ binv


class Pipeline:
    """Stages of the computation, run lazily and kept for inspection."""

    def __init__(self, s: TriangulatedSurface, generators: Optional[Sequence[Mat2]] = None,
                 max_contractions: int = DEFAULT_MAX_CONTRACTIONS,
                 max_a: int = DEFAULT_MAX_A, max_n: int = DEFAULT_MAX_N, max_parabolics: int = 12,
                 search_rounds: Sequence[tuple[int, int]] = ((3, 3), (6, 5), (10, 6)),
                 min_rounds: int = 2):
        self.original = s
        self.user_generators = list(generators) if generators else None
        self.max_contractions = max_contractions
        self.max_a = max_a
        self.max_n = max_n
        self.search_rounds = tuple(search_rounds)
        self.min_rounds = min_rounds
        self.max_parabolics = max_parabolics
        self._saddles: dict = {}
        self.frame = choose_frame(s)
        self.frame_inv = self.frame.inverse()
        self.surface = s.apply_matrix(self.frame)
        self.fixed, self.fixed_hist = make_delaunay(self.surface)
        self._hd = self._vd = None
        self._regions = None
        self._segments = None
        self._placed = None
        self._candidates = None
        self._orbit = None
        self.g0 = self.a = self.n = self.g = None
        self._fallback = None
        self._maps = None

    # -- stage 1 -------------------------------------------------------------

    def decompositions(self) -> tuple[CylinderDecomposition, CylinderDecomposition]:
        if self._hd is None:
            K = self.surface.field
            self._hd = decompose(self.surface, Vec(K.one, K.zero), self.max_contractions)
            self._vd = decompose(self.surface, Vec(K.zero, K.one), self.max_contractions)
            log.info("horizontal: %d cylinders, t = %s; vertical: %d cylinders, t = %s",
                     len(self._hd.cylinders), self._hd.t, len(self._vd.cylinders), self._vd.t)
        return self._hd, self._vd

    def regions(self) -> list[Region]:
        if self._regions is None:
            hd, vd = self.decompositions()
            if not check_nonsquare_tiled(self.surface, hd, vd):
                raise SquareTiledUnsupported(
                    "product of the parabolic shears is rational: the surface is square-tiled")
            self._regions = regions(hd, vd, self.fixed, self.fixed_hist)
        return self._regions

    # -- stage 2 -------------------------------------------------------------

    def segments(self) -> list[CandidateSegment]:
        if self._segments is None:
            hd, vd = self.decompositions()
            self._segments = candidate_segments(hd, vd, self.regions())
            log.info("%d candidate segments", len(self._segments))
        return self._segments

    def placed_segments(self) -> tuple[list[SurfaceSegment], list[SurfacePoint]]:
        if self._placed is None:
            self._placed = place_segments(self.fixed, self.regions(), self.segments())
        return self._placed

    # -- stage 3 -------------------------------------------------------------

    def hyperbolic(self) -> Mat2:
        if self.g is None:
            hd, vd = self.decompositions()
            dirs = segment_directions(self.segments())
            m_h = hd.parabolic
            m_v = vd.parabolic.inverse()
            self.g0, self.a = choose_hyperbolic(dirs, m_h, m_v, self.max_a)
            self.n = separating_power(self.g0, dirs, self.max_n)
            self.g = self.g0 ** self.n
            log.info("hyperbolic element a = %d, power n = %d", self.a, self.n)
        return self.g

    def candidates(self) -> set[SurfacePoint]:
        if self._candidates is None:
            g = self.hyperbolic()
            segs, pts = self.placed_segments()
            f = AffineMap(self.fixed, g, target=self._fixed_cells())
            self._candidates = candidate_points(self.fixed, segs, pts, f)
            log.info("%d candidate points", len(self._candidates))
        return self._candidates

    # -- stage 4 -------------------------------------------------------------

    def _fixed_cells(self):
        if not hasattr(self, "_cells"):
            self._cells = delaunay_cells(self.fixed)
        return self._cells

    def generators(self) -> list[Mat2]:
        """Generators in the working frame: supplied ones, or those the fallback used."""
        if self.user_generators is not None:
            P, Pi = self.frame, self.frame_inv
            return [P @ g @ Pi for g in self.user_generators]
        self.orbit()
        return list(self._fallback)

    def _translation_automorphisms(self) -> list[AffineMap]:
        cells = self._fixed_cells()
        K = self.surface.field
        ident = Mat2(K.one, K.zero, K.zero, K.one)
        autos = find_translation_isomorphisms(self.fixed, self.fixed)
        return [AffineMap(self.fixed, ident, target=cells, index=i)
                for i, iso in enumerate(autos) if not iso.is_identity()]

    def saddle_vectors(self, height: int = 3, depth: int = 3) -> list[Vec]:
        """Holonomies of saddle connections, shortest first.

        For every slope ``p/q`` with ``|p|, q <= height`` the surface is
        sheared so that the slope becomes an axis and then squeezed along it
        by up to ``2**depth``; the edges of each Delaunay triangulation are
        saddle connections, pulled back to the working frame.  Not
        exhaustive, but every vector returned is genuine.
        """
        key = (height, depth)
        if key not in self._saddles:
            K = self.surface.field
            one, zero = K.one, K.zero
            slopes = sorted({Fraction(p, q) for q in range(1, height + 1)
                             for p in range(-height, height + 1)})
            vecs = set()
            for sl in slopes:
                for flip in (False, True):
                    shear = Mat2(one, -one * sl, zero, one) if flip else Mat2(one, zero, -one * sl, one)
                    for k in range(depth + 1):
                        f = Fraction(1, 2 ** k)
                        squeeze = Mat2(one / f, zero, zero, one * f) if flip else Mat2(one * f, zero, zero, one / f)
                        A = squeeze @ shear
                        d, _ = make_delaunay(self.fixed.apply_matrix(A))
                        Ai = A.inverse()
                        vecs.update(Ai @ e for e in _edge_directions(d))
            self._saddles[key] = sorted(vecs, key=lambda e: (float(e.dot(e)), e.x, e.y))
        return self._saddles[key]

    def saddle_directions(self, height: int = 3, depth: int = 3) -> list[Vec]:
        """One saddle vector per direction, shortest first."""
        dirs: list[Vec] = []
        for e in self.saddle_vectors(height, depth):
            if not any(not e.cross(d) for d in dirs):
                dirs.append(e)
        return dirs

    def _pair_elements(self, vecs: Sequence[Vec]) -> Iterator[Mat2]:
        """Veech group elements sending two short edges to a pair of saddle vectors.

        An affine automorphism maps saddle connections to saddle connections
        and preserves the cross product, so every element whose images of the
        edges all lie in ``vecs`` turns up here.
        """
        edges = sorted(_edge_directions(self.fixed), key=lambda e: (float(e.dot(e)), e.x, e.y))
        u1 = edges[0]
        u2 = next(e for e in edges if e.cross(u1))
        cr = u1.cross(u2)
        ui = Mat2(u1.x, u2.x, u1.y, u2.y).inverse()
        pool = set(vecs)
        others = set(edges)
        xs = np.array([float(v.x) for v in vecs])
        ys = np.array([float(v.y) for v in vecs])
        crf = float(cr)
        for i, v1 in enumerate(vecs):
            # float prefilter on the cross product; survivors are checked exactly
            near = np.abs(xs[i] * ys - ys[i] * xs - crf) <= 1e-9 * (1 + abs(crf))
            for j in np.flatnonzero(near):
                v2 = vecs[j]
                if v1.cross(v2) != cr:
                    continue
                g = Mat2(v1.x, v2.x, v1.y, v2.y) @ ui
                # cheap necessary condition before the isomorphism search
                if all(g @ e in pool for e in others):
                    yield g

    def _parabolics(self) -> Iterator[Mat2]:
        dirs = [v for v in self.saddle_directions() if v.x and v.y]
        for v in dirs[:self.max_parabolics]:
            try:
                yield decompose(self.surface, v, self.max_contractions).parabolic
            except (NotVeechData, NotPeriodicDirection):
                continue

    def _fallback_orbit(self) -> OrbitResult:
        """Filter with Veech group elements found by search when no generating set is supplied.

        Starts from the two base parabolics, -I when it acts and the translation
        automorphisms.  Then come the parabolics of a few more saddle connection
        directions and, in rounds over growing pools of saddle vectors, the
        elements found by matching vector pairs.  An element is kept when it
        shrinks the surviving set.  The search stops after the minimum number
        of rounds once a round removes nothing.

        Every element used is genuine, so nothing periodic is removed, and
        because survivors of a larger group are survivors of a smaller one,
        each step only needs the current survivors.
        """
        hd, vd = self.decompositions()
        K = self.surface.field
        cells = self._fixed_cells()
        gens = [hd.parabolic, vd.parabolic.inverse()]
        minus = Mat2(-K.one, K.zero, K.zero, -K.one)
        maps = [AffineMap(self.fixed, g, target=cells) for g in gens]
        try:
            maps.append(AffineMap(self.fixed, minus, target=cells))
            gens.append(minus)
        except NotInVeechGroup:
            pass
        autos = self._translation_automorphisms()
        res = reduce_candidates(self.candidates(), maps + autos)
        has_minus = minus in gens
        seen: set[Mat2] = set()

        def mark(g: Mat2) -> None:
            # g, its inverse and (when -I acts) their negatives add the same edges
            for h in (g, g.inverse()):
                seen.add(h)
                if has_minus:
                    seen.add(-h)

        for g in gens:
            mark(g)

        def absorb(stream) -> bool:
            nonlocal res
            shrunk = False
            for g in stream:
                if len(res.points) <= 1:
                    break
                if g in seen:
                    continue
                mark(g)
                try:
                    f = AffineMap(self.fixed, g, target=cells)
                except NotInVeechGroup:
                    continue
                nxt = reduce_candidates(res.points, maps + autos + [f])
                if len(nxt.points) < len(res.points):
                    gens.append(g)
                    maps.append(f)
                    log.info("element %s leaves %d points", g, len(nxt.points))
                    res = nxt
                    shrunk = True
            return shrunk

        absorb(self._parabolics())
        for i, (height, depth) in enumerate(self.search_rounds):
            shrunk = absorb(self._pair_elements(self.saddle_vectors(height, depth)))
            if i + 1 >= self.min_rounds and not shrunk:
                break
        self._fallback = gens
        self._maps = maps + autos
        return reduce_candidates(res.points, self._maps)

    def point_maps(self) -> list:
        """Point maps of the generators followed by the translation automorphisms.

        The ``orbit_maps`` of :meth:`orbit` are listed in the same order.
        """
        if self._maps is None:
            if self.user_generators is None:
                self.orbit()
            else:
                cells = self._fixed_cells()
                self._maps = ([AffineMap(self.fixed, g, target=cells) for g in self.generators()]
                              + self._translation_automorphisms())
        return self._maps

    def orbit(self) -> OrbitResult:
        if self._orbit is None:
            if self.user_generators is not None:
                self._orbit = reduce_candidates(self.candidates(), self.point_maps())
            else:
                self._orbit = self._fallback_orbit()
        return self._orbit

    def verify(self, depth: int) -> bool:
        """Words of length up to ``depth`` keep the surviving set closed."""
        return verify_orbits(self.orbit().points, self.point_maps(), depth)

    # -- output ------------------------------------------------------------

    def to_original(self, p: SurfacePoint) -> SurfacePoint:
        q = self.fixed_hist.backward(p)
        q = SurfacePoint(q.tri, self.frame_inv @ q.coords)
        return canonical_point(q, self.original)

    def periodic_points(self) -> list[PeriodicPoint]:
        """Surviving points on the original surface; cone points are flagged singular."""
        cones = set()
        for corners in self.original.vertex_classes():
            if self.original.cone_angle_turns(corners) > 1:
                t, k = corners[0]
                cones.add(canonical_point(SurfacePoint(t, self.original.triangles[t][k]), self.original))
        out = [PeriodicPoint(q, q in cones) for q in map(self.to_original, self.orbit().points)]
        out.sort(key=lambda pp: (pp.point.tri, pp.point.coords.x, pp.point.coords.y))
        return out

    def original_generators(self) -> list[Mat2]:
        """Generators used by the filter, in the frame of the input surface."""
        P, Pi = self.frame, self.frame_inv
        return [Pi @ g @ P for g in self.generators()]

    def result(self, verify_depth: int = 0) -> dict:
        """JSON-ready summary: points, components and per-map orbit data."""
        orbit = self.orbit()
        pts = self.periodic_points()
        index = {pp.point: i for i, pp in enumerate(pts)}
        local = {p: index[self.to_original(p)] for p in orbit.points}
        gens = self.original_generators()
        maps = []
        for k, m in enumerate(orbit.orbit_maps):
            label = {"generator": k} if k < len(gens) else {"translation_automorphism": k - len(gens)}
            image = [None] * len(pts)
            for p, q in m.items():
                image[local[p]] = local[q]
            maps.append({**label, "image": image})
        out = {
            "surface": self.original.name,
            "disc": self.original.disc,
            "generators_source": "supplied" if self.user_generators is not None else "search",
            "generators": [mat_to_json(g) for g in gens],
            "hyperbolic": {"a": self.a, "n": self.n, "matrix": mat_to_json(self.frame_inv @ self.g @ self.frame)},
            "candidate_count": len(self.candidates()),
            "points": [{**point_to_json(pp.point), "singular": pp.singular} for pp in pts],
            "components": sorted(sorted(local[p] for p in c) for c in orbit.components),
            "orbit_maps": maps,
        }
        if verify_depth:
            out["verified_depth"] = verify_depth
            out["verified"] = self.verify(verify_depth)
        return out

def periodic_points(s: TriangulatedSurface, generators: Optional[Sequence[Mat2]] = None,
                    **caps) -> list[PeriodicPoint]:
    return Pipeline(s, generators, **caps).periodic_points()
