"""Builders for the surfaces the pipeline is exercised on.

* the square torus (square-tiled, used to test rejection),
* genus-two eigenforms drawn as L-shaped tables,
* genus-three Prym eigenforms in the two S-shaped models.
"""

from __future__ import annotations

import math
from typing import Optional

from .errors import SquareTiledUnsupported
from .geom import Mat2, Vec
from .numfield import QuadField, squarefree_part
from .surface import TriangulatedSurface

__all__ = [
    "square_torus",
    "build_h2_eigenform",
    "build_prym",
    "prym_prototype",
    "triangulate_rectangle",
    "surface_from_edge_vectors",
]


def _symmetric(pairs: dict) -> dict:
    out = dict(pairs)
    out.update({v: k for k, v in pairs.items()})
    return out


def triangulate_rectangle(origin: Vec, base, height):
    """Cut a rectangle along its rising diagonal.

    The lower triangle has edges (right side, diagonal, bottom); the upper one
    (left side, diagonal, top).  Edge 1 of each is the shared diagonal.
    """
    x0, y0 = origin.x, origin.y
    lower = (Vec(x0 + base, y0), Vec(x0 + base, y0 + height), Vec(x0, y0))
    upper = (Vec(x0, y0 + height), Vec(x0, y0), Vec(x0 + base, y0 + height))
    return lower, upper


def surface_from_edge_vectors(triples, gluing: dict, disc: int, name=None) -> TriangulatedSurface:
    """Each triangle given by its three edge vectors, first vertex at the origin."""
    tris = []
    for e0, e1, e2 in triples:
        if not (e0 + e1 + e2).is_zero():
            raise ValueError("edge vectors of a triangle must sum to zero")
        origin = Vec(e0.x * 0, e0.y * 0)
        tris.append((origin, e0, e0 + e1))
    return TriangulatedSurface(tris, _symmetric(gluing), disc, name)


def square_torus(disc: int = 2) -> TriangulatedSurface:
    """Unit square with opposite sides glued.  ``disc`` only fixes the coordinate field."""
    K = QuadField(disc)
    lower, upper = triangulate_rectangle(Vec(K.zero, K.zero), K.one, K.one)
    gluing = _symmetric({(0, 1): (1, 1), (0, 0): (1, 0), (0, 2): (1, 2)})
    return TriangulatedSurface([lower, upper], gluing, disc, name="square torus")


def _check_discriminant(D: int, residues, modulus: int) -> int:
    if not isinstance(D, int) or D <= 0:
        raise ValueError(f"discriminant must be a positive integer, got {D!r}")
    root = math.isqrt(D)
    if root * root == D:
        raise SquareTiledUnsupported(f"D = {D} is a perfect square; the eigenform is square-tiled")
    if D % modulus not in residues:
        raise ValueError(f"D = {D} is not congruent to {sorted(residues)} mod {modulus}")
    return squarefree_part(D)[1]


def build_h2_eigenform(D: int) -> tuple[TriangulatedSurface, Optional[list[Mat2]]]:
    """Genus-two eigenform of discriminant D as an L-shaped table.

    The table is a (w x 1) rectangle with a (lam x lam) square on its left
    end, where ``lam = (c + sqrt(D)) / 2`` and ``w = (D - c^2) / 4`` with
    ``c`` in {0, -1} matching the parity of D.
    """
    if isinstance(D, int) and 0 < D < 5 and math.isqrt(D) ** 2 != D:
        raise ValueError(f"D must be at least 5, got {D}")
    d = _check_discriminant(D, {0, 1}, 4)
    K = QuadField(d)
    c = 0 if D % 2 == 0 else -1
    w = (D - c * c) // 4
    lam = (K(c) + K.sqrt_of(D)) / 2
    zero, one = K.zero, K.one
    rects = [
        (Vec(zero, zero), lam, one),
        (Vec(lam, zero), K(w) - lam, one),
        (Vec(zero, one), lam, lam),
    ]
    tris = []
    for origin, b, h in rects:
        tris.extend(triangulate_rectangle(origin, b, h))
    gluing = _symmetric({
        # boundary
        (0, 2): (5, 2), (2, 2): (3, 2), (2, 0): (1, 0), (4, 0): (5, 0),
        # interior
        (0, 1): (1, 1), (2, 1): (3, 1), (4, 1): (5, 1), (0, 0): (3, 0), (1, 2): (4, 2),
    })
    return TriangulatedSurface(tris, gluing, d, name=f"H(2) L-table D={D}"), None


def prym_prototype(D: int) -> tuple[int, int, int, int]:
    """Prototype parameters ``(w, h, t, e)`` with ``h = 1``, ``t = 0`` and the largest admissible ``e``.

    Admissible means ``D = e^2 + 8w`` with ``w > 0`` and ``0 < lam < w``
    where ``lam = (e + sqrt(D)) / 2``.
    """
    root = math.isqrt(D)
    for e in range(root, -root - 1, -1):
        if (D - e * e) % 8 or D - e * e <= 0:
            continue
        w = (D - e * e) // 8
        # w > 0 forces sqrt(D) > |e|, so lam > 0; lam < w iff sqrt(D) < 2w - e
        lhs = 2 * w - e
        if lhs > 0 and lhs * lhs > D:
            return w, 1, 0, e
    raise ValueError(f"no Prym prototype with h = 1, t = 0 for D = {D}")


def _prym_generators_17(K: QuadField) -> list[Mat2]:
    r = K.gen
    return [
        Mat2(K(1), K(2), K(0), K(1)),
        Mat2(K(-1), K(2), -r / 4 - K(5) / 4, r / 2 + K(3) / 2),
        Mat2(r / 2 + K(3) / 2, K(-2), r / 4 + K(5) / 4, K(-1)),
        Mat2(-3 * r / 2 - K(13) / 2, 3 * r / 2 + K(9) / 2,
             -7 * r / 4 - K(27) / 4, 3 * r / 2 + K(11) / 2),
    ]


def build_prym(D: int, model: str = "A+") -> tuple[TriangulatedSurface, Optional[list[Mat2]]]:
    """Genus-three Prym eigenform of discriminant D in model ``A+`` or ``A-``.

    Generators of the Veech group are only known for D = 17 in model A+.
    """
    if model not in ("A+", "A-"):
        raise ValueError(f"model must be 'A+' or 'A-', got {model!r}")
    if isinstance(D, int) and D < 8:
        raise ValueError(f"D must be at least 8, got {D}")
    d = _check_discriminant(D, {0, 1, 4}, 8)
    w, h, t, e = prym_prototype(D)
    K = QuadField(d)
    lam = (K(e) + K.sqrt_of(D)) / 2
    z = K.zero
    NE = Vec(K(t), K(h))
    if model == "A+":
        ES, EL, NS = Vec(lam, z), Vec(K(w), z), Vec(z, lam)
        block = [
            (NE, -ES, ES - NE),
            (ES, -ES + NE, -NE),
            (-EL + ES, EL - ES - NE, NE),
            (EL - ES, -EL + ES + NE, -NE),
        ]
        triples = [(ES, -ES + NS, -NS), (-ES, ES - NS, NS)] + block + block
        gluing = {
            (0, 0): (6, 1), (0, 1): (1, 1), (0, 2): (1, 2), (1, 0): (3, 0),
            (2, 0): (5, 2), (2, 1): (7, 0), (2, 2): (3, 1), (3, 2): (4, 2),
            (4, 0): (5, 0), (4, 1): (5, 1), (6, 0): (9, 2), (6, 2): (7, 1),
            (7, 2): (8, 2), (8, 0): (9, 0), (8, 1): (9, 1),
        }
    else:
        EL, ES, NS = Vec(K(w) - lam, z), Vec(lam / 2, z), Vec(z, lam / 2)
        triples = [
            (ES, NE - ES, -NE), (-ES, -NE + ES, NE),
            (ES, NE - ES, -NE), (-ES, -NE + ES, NE),
            (EL, NE - EL, -NE), (-EL, -NE + EL, NE),
            (ES, NS - ES, -NS), (-ES, -NS + ES, NS),
            (ES, NS - ES, -NS), (-ES, -NS + ES, NS),
        ]
        gluing = {
            (0, 0): (7, 0), (0, 1): (1, 1), (0, 2): (5, 2), (1, 0): (6, 0),
            (1, 2): (2, 2), (2, 0): (9, 0), (2, 1): (3, 1), (3, 0): (8, 0),
            (3, 2): (4, 2), (4, 0): (5, 0), (4, 1): (5, 1), (6, 1): (7, 1),
            (6, 2): (7, 2), (8, 1): (9, 1), (8, 2): (9, 2),
        }
    s = surface_from_edge_vectors(triples, gluing, d, name=f"Prym {model} D={D}")
    gens = _prym_generators_17(K) if (D == 17 and model == "A+") else None
    return s, gens
