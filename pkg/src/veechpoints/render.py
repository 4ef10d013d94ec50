"""SVG 1.1 pictures of a surface with segments, candidates and periodic points.

Triangles are developed into the plane along a spanning tree of the gluing,
so a polygonal presentation shows up as one connected polygon.  Floats
appear only in the drawing; each drawn item also carries its exact
coordinates in ``vp:`` attributes.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from collections import deque
from typing import Iterable, Optional, Sequence

from .geom import Vec
from .surface import Piece, SurfacePoint, TriangulatedSurface

__all__ = ["develop", "render_svg"]

SVG_NS = "http://www.w3.org/2000/svg"
VP_NS = "urn:veechpoints:exact"

ET.register_namespace("", SVG_NS)
ET.register_namespace("vp", VP_NS)


def develop(s: TriangulatedSurface) -> list[Vec]:
    """Offset of each triangle in a breadth-first development from triangle 0."""
    zero = s.triangles[0][0] - s.triangles[0][0]
    offsets: list[Optional[Vec]] = [None] * len(s)
    for root in range(len(s)):
        if offsets[root] is not None:
            continue
        offsets[root] = zero
        queue = deque([root])
        while queue:
            t = queue.popleft()
            tri = s.triangles[t]
            for e in range(3):
                u, f = s.gluing[(t, e)]
                if offsets[u] is None:
                    offsets[u] = offsets[t] + tri[(e + 1) % 3] - s.triangles[u][f]
                    queue.append(u)
    return offsets  # type: ignore[return-value]


def _exact(v: Vec) -> str:
    return json.dumps([v.x.to_ints(), v.y.to_ints()], separators=(",", ":"))


class _Canvas:
    def __init__(self, points: Iterable[tuple[float, float]], size: float, margin: float):
        pts = list(points)
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        self.x0, self.y1 = min(xs), max(ys)
        span = max(max(xs) - self.x0, self.y1 - min(ys), 1e-12)
        self.scale = (size - 2 * margin) / span
        self.margin = margin
        self.width = (max(xs) - self.x0) * self.scale + 2 * margin
        self.height = (self.y1 - min(ys)) * self.scale + 2 * margin

    def xy(self, v: Vec) -> tuple[str, str]:
        x, y = v.as_floats()
        return (f"{(x - self.x0) * self.scale + self.margin:.3f}",
                f"{(self.y1 - y) * self.scale + self.margin:.3f}")


def render_svg(s: TriangulatedSurface, *,
               segments: Sequence[Piece] = (),
               candidates: Iterable[SurfacePoint] = (),
               periodic: Iterable[SurfacePoint] = (),
               singular: Iterable[SurfacePoint] = (),
               title: Optional[str] = None,
               size: float = 640.0, margin: float = 24.0) -> str:
    """SVG document for ``s`` with the given overlays.

    ``segments`` are triangle-local pieces; points are ``SurfacePoint`` values
    on ``s``.  Layers, bottom to top: triangles, segments, candidates,
    periodic points, cone points.
    """
    offs = develop(s)
    world = [[v + offs[t] for v in tri] for t, tri in enumerate(s.triangles)]
    canvas = _Canvas((v.as_floats() for tri in world for v in tri), size, margin)

    root = ET.Element(f"{{{SVG_NS}}}svg", {
        "version": "1.1",
        "width": f"{canvas.width:.0f}",
        "height": f"{canvas.height:.0f}",
        "viewBox": f"0 0 {canvas.width:.3f} {canvas.height:.3f}",
        f"{{{VP_NS}}}disc": str(s.disc),
    })
    if title or s.name:
        ET.SubElement(root, f"{{{SVG_NS}}}title").text = title or s.name

    def group(name: str, **style) -> ET.Element:
        return ET.SubElement(root, f"{{{SVG_NS}}}g", {"id": name, **style})

    g_tri = group("triangles", fill="#eef3fb", stroke="#7a8ca8")
    g_tri.set("stroke-width", "0.6")
    for t, tri in enumerate(world):
        pts = " ".join(",".join(canvas.xy(v)) for v in tri)
        ET.SubElement(g_tri, f"{{{SVG_NS}}}polygon", {
            "points": pts, f"{{{VP_NS}}}triangle": str(t),
            f"{{{VP_NS}}}offset": _exact(offs[t]),
        })

    g_seg = group("segments", stroke="#1f5fbf", fill="none")
    g_seg.set("stroke-width", "1")
    for pc in segments:
        (x1, y1), (x2, y2) = canvas.xy(pc.start + offs[pc.tri]), canvas.xy(pc.end + offs[pc.tri])
        ET.SubElement(g_seg, f"{{{SVG_NS}}}line", {
            "x1": x1, "y1": y1, "x2": x2, "y2": y2,
            f"{{{VP_NS}}}triangle": str(pc.tri),
            f"{{{VP_NS}}}start": _exact(pc.start), f"{{{VP_NS}}}end": _exact(pc.end),
        })

    def dots(name: str, pts: Iterable[SurfacePoint], r: float, fill: str) -> None:
        g = group(name, fill=fill)
        for p in pts:
            cx, cy = canvas.xy(p.coords + offs[p.tri])
            ET.SubElement(g, f"{{{SVG_NS}}}circle", {
                "cx": cx, "cy": cy, "r": f"{r}",
                f"{{{VP_NS}}}triangle": str(p.tri), f"{{{VP_NS}}}coords": _exact(p.coords),
            })

    dots("candidates", candidates, 1.6, "#8a8a8a")
    dots("periodic-points", periodic, 4.0, "#d62728")
    dots("cone-points", singular, 4.0, "#000000")
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"
