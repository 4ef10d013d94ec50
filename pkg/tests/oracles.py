"""Independent oracles used by the tests.

Nothing here calls the pipeline, the isomorphism search or the point
canonicalization of the package; only the plain data of a surface
(triangles, gluing) and exact field arithmetic are used.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from veechpoints.geom import Vec


def _edge(s, t, k):
    tri = s.triangles[t]
    return tri[(k + 1) % 3] - tri[k]


def point_reflection_symmetry(s) -> Optional[dict]:
    """Combinatorial automorphism with derivative -I, as a map of half-edges.

    Such a map sends triangle ``t`` to some ``t'`` and edge ``k`` to edge
    ``k + r`` with opposite vector, and commutes with the gluing.  Triangle 0
    fixes the whole map, so each of its 3n possible images is tried.
    """
    n = len(s.triangles)
    for t0 in range(n):
        for r in range(3):
            tri_map = {0: (t0, r)}
            stack = [0]
            ok = True
            while stack and ok:
                t = stack.pop()
                u, rot = tri_map[t]
                for k in range(3):
                    if _edge(s, u, (k + rot) % 3) != -_edge(s, t, k):
                        ok = False
                        break
                    pt, pk = s.gluing[(t, k)]
                    qt, qk = s.gluing[(u, (k + rot) % 3)]
                    want = (qt, (qk - pk) % 3)
                    if pt in tri_map:
                        if tri_map[pt] != want:
                            ok = False
                            break
                    else:
                        tri_map[pt] = want
                        stack.append(pt)
            if ok and len(tri_map) == n and len({v[0] for v in tri_map.values()}) == n:
                return {(t, k): (u, (k + rot) % 3) for t, (u, rot) in tri_map.items() for k in range(3)}
    return None


def _least(reps):
    return min(reps, key=lambda p: (p[0], p[1].x, p[1].y))


def vertex_points(s) -> list[tuple[int, Vec]]:
    """Least representative of every vertex class (corner orbits under the gluing)."""
    n = len(s.triangles)
    parent = {(t, k): (t, k) for t in range(n) for k in range(3)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    # the start of edge (t, k) is the end of its partner
    for (t, k), (u, f) in s.gluing.items():
        a, b = find((t, k)), find((u, (f + 1) % 3))
        parent[a] = b
    classes: dict = {}
    for c in parent:
        classes.setdefault(find(c), []).append(c)
    return [_least([(t, s.triangles[t][k]) for t, k in cs]) for cs in classes.values()]


def involution_fixed_points(s) -> set[tuple[int, Vec]]:
    """Fixed points of the point-reflection involution, least representatives.

    A point reflection cannot preserve a triangle, so fixed points sit at
    vertices or at midpoints of edges the involution sends to their partner.
    Every vertex of the built families is the single cone point, which is
    fixed.
    """
    sym = point_reflection_symmetry(s)
    if sym is None:
        raise ValueError("no point-reflection symmetry on this triangulation")
    half = Fraction(1, 2)
    out = set()
    for (t, k), img in sym.items():
        if img != s.gluing[(t, k)]:
            continue
        u, f = img
        tri_t, tri_u = s.triangles[t], s.triangles[u]
        m1 = (tri_t[k] + tri_t[(k + 1) % 3]) * half
        m2 = (tri_u[f] + tri_u[(f + 1) % 3]) * half
        out.add(_least([(t, m1), (u, m2)]))
    out.update(vertex_points(s))
    return out
