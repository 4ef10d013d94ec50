"""Periodic points of the golden L (H(2), D = 5), written as JSON and SVG.

    python demos/golden_l.py [OUTDIR]
"""

import json
import sys
from pathlib import Path

from veechpoints.families import build_h2_eigenform
from veechpoints.pipeline import Pipeline
from veechpoints.render import render_svg

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
out.mkdir(parents=True, exist_ok=True)

s, _ = build_h2_eigenform(5)
P = Pipeline(s)
for pp in P.periodic_points():
    tag = "cone point" if pp.singular else "regular"
    print(f"triangle {pp.point.tri}: ({pp.point.coords.x}, {pp.point.coords.y})  [{tag}]")

(out / "golden_l.json").write_text(json.dumps(P.result(), indent=1))
pieces = [pc for seg in P.placed_segments()[0] for pc in seg.pieces]
pts = P.periodic_points()
(out / "golden_l.svg").write_text(render_svg(
    s, periodic=[pp.point for pp in pts if not pp.singular],
    singular=[pp.point for pp in pts if pp.singular], title="golden L"))
(out / "golden_l_segments.svg").write_text(render_svg(
    P.fixed, segments=pieces, candidates=P.candidates(), title="golden L: segments and candidates"))
print(f"wrote {out}/golden_l.json, golden_l.svg, golden_l_segments.svg")
