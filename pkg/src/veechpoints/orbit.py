"""Orbit-graph filter: keep candidates whose orbit never leaves the candidate set."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .surface import SurfacePoint

__all__ = ["OrbitResult", "reduce_candidates", "verify_orbits"]

PointMap = Callable[[SurfacePoint], SurfacePoint]


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller root so the escape node (index 0) stays a root
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass
class OrbitResult:
    points: list[SurfacePoint]
    components: list[list[SurfacePoint]]
    orbit_maps: list[dict] = field(default_factory=list)   # per generator: point -> image


def reduce_candidates(candidates: Iterable[SurfacePoint], maps: Sequence[PointMap]) -> OrbitResult:
    """Points of ``candidates`` not connected to the escape vertex.

    A candidate is joined to its image under each map, or to the escape
    vertex when the image is not a candidate.  ``maps`` are the affine
    automorphisms for a generating set, as canonical point maps.
    """
    pts = sorted(set(candidates), key=_key)
    index = {p: i + 1 for i, p in enumerate(pts)}
    uf = _UnionFind(len(pts) + 1)
    orbit_maps = []
    for f in maps:
        images = {}
        for p in pts:
            q = f(p)
            images[p] = q
            uf.union(index[p], index.get(q, 0))
        orbit_maps.append(images)
    escape = uf.find(0)
    comps: dict[int, list[SurfacePoint]] = {}
    for p in pts:
        r = uf.find(index[p])
        if r != escape:
            comps.setdefault(r, []).append(p)
    kept = sorted((p for c in comps.values() for p in c), key=_key)
    components = sorted(comps.values(), key=lambda c: _key(c[0]))
    kept_set = set(kept)
    orbit_maps = [{p: m[p] for p in kept} for m in orbit_maps]
    assert all(q in kept_set for m in orbit_maps for q in m.values())
    return OrbitResult(kept, components, orbit_maps)


def verify_orbits(points: Iterable[SurfacePoint], maps: Sequence[PointMap], depth: int) -> bool:
    """Apply all words of length up to ``depth`` and check the set stays closed."""
    pts = set(points)
    frontier = set(pts)
    for _ in range(depth):
        nxt = set()
        for p in frontier:
            for f in maps:
                q = f(p)
                if q not in pts:
                    return False
                nxt.add(q)
        frontier = nxt
    return True


def _key(p: SurfacePoint):
    return (p.tri, p.coords.x, p.coords.y)
