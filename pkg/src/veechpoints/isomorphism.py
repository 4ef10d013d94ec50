"""Translation isomorphisms between surfaces and transport of points by affine maps.

Both surfaces are first made Delaunay; triangles joined by cocircular
(degenerate) hinges are merged into cells, so the decomposition no longer
depends on how ties were broken.  Cells are convex polygons; an isomorphism
is a cyclic relabeling of each cell's boundary that respects the gluings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .delaunay import HingeState, hinge, is_locally_delaunay, make_delaunay
from .errors import NotInVeechGroup
from .geom import Mat2, Vec, point_in_triangle
from .surface import History, SurfacePoint, TriangulatedSurface, canonical_point

__all__ = [
    "Cell",
    "CellDecomposition",
    "Isomorphism",
    "delaunay_cells",
    "find_translation_isomorphism",
    "find_translation_isomorphisms",
    "AffineMap",
    "map_point",
    "stabilizes",
]


@dataclass
class Cell:
    tris: list[int]
    offsets: dict            # triangle -> translation from its frame into cell coords
    boundary: list           # (half-edge, start point, edge vector), ccw

    @property
    def vectors(self) -> list[Vec]:
        return [b[2] for b in self.boundary]


class CellDecomposition:
    """Delaunay cells of a Delaunay-triangulated surface."""

    def __init__(self, s: TriangulatedSurface):
        self.surface = s
        n = len(s)
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        internal = set()
        for (t, e), (u, f) in s.edge_pairs():
            if is_locally_delaunay(hinge(s, t, e)) is HingeState.DEGENERATE:
                internal.add((t, e))
                internal.add((u, f))
                parent[find(t)] = find(u)
        groups: dict[int, list[int]] = {}
        for t in range(n):
            groups.setdefault(find(t), []).append(t)

        self.cells: list[Cell] = []
        self.cell_of: dict[int, int] = {}
        self.boundary_index: dict[tuple[int, int], tuple[int, int]] = {}
        for root in sorted(groups, key=lambda r: min(groups[r])):
            members = groups[root]
            seed = min(members)
            zero = s.triangles[seed][0] - s.triangles[seed][0]
            offsets = {seed: zero}
            stack = [seed]
            while stack:
                t = stack.pop()
                tri = s.triangles[t]
                for e in range(3):
                    if (t, e) not in internal:
                        continue
                    u, f = s.gluing[(t, e)]
                    off = tri[(e + 1) % 3] + offsets[t] - s.triangles[u][f]
                    if u in offsets:
                        if offsets[u] != off:
                            raise RuntimeError("Delaunay cell does not develop into the plane")
                        continue
                    offsets[u] = off
                    stack.append(u)
            starts = {}
            for t in members:
                tri = s.triangles[t]
                for e in range(3):
                    if (t, e) in internal:
                        continue
                    p = tri[e] + offsets[t]
                    starts[p] = ((t, e), p, tri[(e + 1) % 3] - tri[e])
            first = min(v[0] for v in starts.values())
            cur = next(v for v in starts.values() if v[0] == first)
            boundary = []
            while True:
                boundary.append(cur)
                nxt = starts[cur[1] + cur[2]]
                if nxt[0] == first:
                    break
                cur = nxt
            if len(boundary) != len(starts):
                raise RuntimeError("Delaunay cell boundary is not a single cycle")
            idx = len(self.cells)
            self.cells.append(Cell(sorted(members), offsets, boundary))
            for t in members:
                self.cell_of[t] = idx
            for i, b in enumerate(boundary):
                self.boundary_index[b[0]] = (idx, i)

    def locate(self, cell: int, p: Vec) -> SurfacePoint:
        """Surface point at cell coordinates ``p``."""
        c = self.cells[cell]
        for t in c.tris:
            q = p - c.offsets[t]
            if point_in_triangle(q, *self.surface.triangles[t]):
                return SurfacePoint(t, q)
        raise ValueError("point lies outside the cell")


def delaunay_cells(s: TriangulatedSurface) -> tuple[CellDecomposition, History]:
    d, hist = make_delaunay(s)
    return CellDecomposition(d), hist


@dataclass(frozen=True)
class Isomorphism:
    """Cell ``a`` of the source goes to cell ``mapping[a][0]`` rotated by ``mapping[a][1]``."""

    mapping: tuple
    translations: tuple    # per source cell, added to cell coordinates

    def is_identity(self) -> bool:
        return all(b == a and r == 0 for a, (b, r) in enumerate(self.mapping))


def _rotations(va: list[Vec], vb: list[Vec]) -> list[int]:
    n = len(va)
    if len(vb) != n:
        return []
    return [r for r in range(n) if all(va[i] == vb[(i + r) % n] for i in range(n))]


def _propagate(c1: CellDecomposition, c2: CellDecomposition, seed_b: int, seed_r: int):
    s1, s2 = c1.surface, c2.surface
    assign = {0: (seed_b, seed_r)}
    stack = [0]
    while stack:
        a = stack.pop()
        b, r = assign[a]
        A, B = c1.cells[a], c2.cells[b]
        n = len(A.boundary)
        for i in range(n):
            pa = s1.gluing[A.boundary[i][0]]
            pb = s2.gluing[B.boundary[(i + r) % n][0]]
            a2, i2 = c1.boundary_index[pa]
            b2, j2 = c2.boundary_index[pb]
            n2 = len(c1.cells[a2].boundary)
            if len(c2.cells[b2].boundary) != n2:
                return None
            r2 = (j2 - i2) % n2
            if a2 in assign:
                if assign[a2] != (b2, r2):
                    return None
                continue
            if r2 not in _rotations(c1.cells[a2].vectors, c2.cells[b2].vectors):
                return None
            assign[a2] = (b2, r2)
            stack.append(a2)
    if len(assign) != len(c1.cells):
        return None
    if len({b for b, _ in assign.values()}) != len(c2.cells):
        return None
    mapping = tuple(assign[a] for a in range(len(c1.cells)))
    trans = tuple(c2.cells[b].boundary[r][1] - c1.cells[a].boundary[0][1]
                  for a, (b, r) in enumerate(mapping))
    return Isomorphism(mapping, trans)


def _isomorphisms(c1: CellDecomposition, c2: CellDecomposition, first_only: bool) -> list[Isomorphism]:
    if len(c1.cells) != len(c2.cells) or len(c1.surface) != len(c2.surface):
        return []
    sig1 = sorted(len(c.boundary) for c in c1.cells)
    sig2 = sorted(len(c.boundary) for c in c2.cells)
    if sig1 != sig2:
        return []
    found = []
    seed = c1.cells[0]
    for b, B in enumerate(c2.cells):
        for r in _rotations(seed.vectors, B.vectors):
            iso = _propagate(c1, c2, b, r)
            if iso is not None:
                found.append(iso)
                if first_only:
                    return found
    return found


def find_translation_isomorphisms(s1: TriangulatedSurface, s2: TriangulatedSurface) -> list[Isomorphism]:
    """All translation equivalences between the Delaunay cell decompositions."""
    if s1.disc != s2.disc:
        return []
    return _isomorphisms(delaunay_cells(s1)[0], delaunay_cells(s2)[0], first_only=False)


def find_translation_isomorphism(s1: TriangulatedSurface, s2: TriangulatedSurface) -> Optional[Isomorphism]:
    if s1.disc != s2.disc:
        return None
    if s1.area() != s2.area():
        return None
    found = _isomorphisms(delaunay_cells(s1)[0], delaunay_cells(s2)[0], first_only=True)
    return found[0] if found else None


class AffineMap:
    """The affine automorphism of ``s`` with derivative ``g``.

    Built once per matrix; :meth:`__call__` maps canonical points of ``s``
    to canonical points of ``s``.  When ``s`` has translation automorphisms
    the derivative does not pin the map down; ``index`` selects one.
    """

    def __init__(self, s: TriangulatedSurface, g: Mat2, target: Optional[tuple] = None, index: int = 0):
        if g.det() != 1:
            raise NotInVeechGroup(f"matrix {g} does not have determinant 1")
        self.surface = s
        self.g = g
        if target is None:
            target = delaunay_cells(s)
        self.cells_target, self.hist_target = target
        gs = s.apply_matrix(g)
        self.cells_source, self.hist_source = delaunay_cells(gs)
        isos = _isomorphisms(self.cells_source, self.cells_target, first_only=(index == 0))
        if len(isos) <= index:
            raise NotInVeechGroup(f"matrix {g} does not stabilize the surface")
        self.iso = isos[index]

    def __call__(self, p: SurfacePoint) -> SurfacePoint:
        q = SurfacePoint(p.tri, self.g @ p.coords)
        q = self.hist_source.forward(q)
        a = self.cells_source.cell_of[q.tri]
        cell = self.cells_source.cells[a]
        pos = q.coords + cell.offsets[q.tri] + self.iso.translations[a]
        b = self.iso.mapping[a][0]
        r = self.cells_target.locate(b, pos)
        r = self.hist_target.backward(r)
        return canonical_point(r, self.surface)


def stabilizes(g: Mat2, s: TriangulatedSurface) -> bool:
    if g.det() != 1:
        return False
    return find_translation_isomorphism(s.apply_matrix(g), s) is not None


def map_point(g: Mat2, p: SurfacePoint, s: TriangulatedSurface) -> SurfacePoint:
    """Image of ``p`` under the affine automorphism of ``s`` with derivative ``g``."""
    return AffineMap(s, g)(p)
