"""Exact JSON encoding of surfaces, matrices and points.

Every field element is written as ``[a_num, a_den, b_num, b_den]`` for
``a + b*sqrt(d)``, so a round trip is bit-exact.  A surface file looks like::

    {"disc": 5,
     "name": "golden L",
     "triangles": [[[x, y], [x, y], [x, y]], ...],
     "gluings": [[[t, e], [u, f]], ...],
     "generators": [[[m00, m01], [m10, m11]], ...]}

``generators`` is optional.  Each gluing entry pairs edge ``e`` of triangle
``t`` with edge ``f`` of triangle ``u`` and is listed once.  On input a flat
``[t, e, u, f]`` entry is accepted too, as is the key ``gluing``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from .errors import ValidationError
from .geom import Mat2, Vec
from .numfield import Quad, squarefree_part
from .surface import SurfacePoint, TriangulatedSurface

__all__ = [
    "quad_to_json",
    "quad_from_json",
    "vec_to_json",
    "vec_from_json",
    "mat_to_json",
    "mat_from_json",
    "point_to_json",
    "point_from_json",
    "surface_to_json",
    "surface_from_json",
    "load_surface",
    "dump_surface",
    "canonical_dumps",
]


def quad_to_json(x: Quad) -> list[int]:
    return x.to_ints()


def quad_from_json(v: Any, d: int, where=None) -> Quad:
    if isinstance(v, int) and not isinstance(v, bool):
        return Quad(v, 0, d)
    if (not isinstance(v, list) or len(v) != 4
            or not all(isinstance(n, int) and not isinstance(n, bool) for n in v)):
        raise ValidationError("field element must be [a_num, a_den, b_num, b_den]", where=where)
    if v[1] <= 0 or v[3] <= 0:
        raise ValidationError("denominators must be positive", where=where)
    return Quad(Fraction(v[0], v[1]), Fraction(v[2], v[3]), d)


def vec_to_json(v: Vec) -> list:
    return [quad_to_json(v.x), quad_to_json(v.y)]


def vec_from_json(v: Any, d: int, where=None) -> Vec:
    if not isinstance(v, list) or len(v) != 2:
        raise ValidationError("point must be a pair of field elements", where=where)
    return Vec(quad_from_json(v[0], d, where), quad_from_json(v[1], d, where))


def mat_to_json(m: Mat2) -> list:
    return [[quad_to_json(x) for x in row] for row in m.rows()]


def mat_from_json(v: Any, d: int, where=None) -> Mat2:
    if not isinstance(v, list) or len(v) != 2 or not all(isinstance(r, list) and len(r) == 2 for r in v):
        raise ValidationError("matrix must be [[a, b], [c, d]]", where=where)
    (a, b), (c, e) = v
    return Mat2(*(quad_from_json(x, d, where) for x in (a, b, c, e)))


def point_to_json(p: SurfacePoint) -> dict:
    return {"triangle": p.tri, "coords": vec_to_json(p.coords)}


def point_from_json(v: Any, d: int) -> SurfacePoint:
    try:
        return SurfacePoint(int(v["triangle"]), vec_from_json(v["coords"], d))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed point: {exc}") from None


def surface_to_json(s: TriangulatedSurface, generators: Optional[Sequence[Mat2]] = None) -> dict:
    out: dict = {"disc": s.disc}
    if s.name:
        out["name"] = s.name
    out["triangles"] = [[vec_to_json(v) for v in tri] for tri in s.triangles]
    out["gluings"] = [[[t, e], [u, f]] for (t, e), (u, f) in s.edge_pairs()]
    if generators:
        out["generators"] = [mat_to_json(g) for g in generators]
    return out


def surface_from_json(obj: Any) -> tuple[TriangulatedSurface, Optional[list[Mat2]]]:
    """Build and validate a surface; returns ``(surface, generators or None)``."""
    if not isinstance(obj, dict):
        raise ValidationError("surface description must be a JSON object")
    if "gluings" not in obj and "gluing" in obj:
        obj = {**obj, "gluings": obj["gluing"]}
    for key in ("disc", "triangles", "gluings"):
        if key not in obj:
            raise ValidationError(f"missing key {key!r}")
    d = obj["disc"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 2:
        raise ValidationError("disc must be an integer >= 2")
    if squarefree_part(d)[1] != d:
        raise ValidationError(f"disc {d} is not squarefree")
    tris = []
    for t, tri in enumerate(obj["triangles"]):
        if not isinstance(tri, list) or len(tri) != 3:
            raise ValidationError("triangle must have three vertices", where=t)
        tris.append(tuple(vec_from_json(v, d, where=t) for v in tri))
    gluing: dict = {}
    for i, entry in enumerate(obj["gluings"]):
        if isinstance(entry, list) and len(entry) == 2 and all(isinstance(h, list) for h in entry):
            entry = entry[0] + entry[1]
        if (not isinstance(entry, list) or len(entry) != 4
                or not all(isinstance(n, int) and not isinstance(n, bool) for n in entry)):
            raise ValidationError("gluing entry must be [[t, e], [u, f]]", where=i)
        t, e, u, f = entry
        for h in ((t, e), (u, f)):
            if h in gluing:
                raise ValidationError("edge glued twice", where=h)
        gluing[(t, e)] = (u, f)
        gluing[(u, f)] = (t, e)
    s = TriangulatedSurface(tris, gluing, d, name=obj.get("name"))
    gens = None
    if obj.get("generators"):
        gens = [mat_from_json(g, d, where=f"generator {i}") for i, g in enumerate(obj["generators"])]
    return s, gens


def load_surface(path) -> tuple[TriangulatedSurface, Optional[list[Mat2]]]:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    return surface_from_json(obj)


def canonical_dumps(obj: Any) -> str:
    """Deterministic compact JSON text with sorted keys and a trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def dump_surface(s: TriangulatedSurface, path, generators: Optional[Sequence[Mat2]] = None) -> None:
    Path(path).write_text(canonical_dumps(surface_to_json(s, generators)))
