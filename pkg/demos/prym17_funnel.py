"""Candidate funnel for the Prym eigenform of discriminant 17 (model A+).

Uses the four Veech group generators stored in data/prym_aplus_17.json and
prints the size of each stage.
"""

from pathlib import Path

from veechpoints.pipeline import Pipeline
from veechpoints.serialize import load_surface

s, gens = load_surface(Path(__file__).parent / "data" / "prym_aplus_17.json")
P = Pipeline(s, gens)
hd, vd = P.decompositions()
print(f"horizontal cylinders: {len(hd.cylinders)}, parabolic {hd.parabolic}")
print(f"vertical cylinders:   {len(vd.cylinders)}, parabolic {vd.parabolic}")
print(f"regions:              {len(P.regions())}")
print(f"candidate segments:   {len(P.segments())}")
P.hyperbolic()
print(f"hyperbolic element:   a = {P.a}, n = {P.n}")
print(f"candidate points:     {len(P.candidates())} (a reference run reported 857)")
pts = P.periodic_points()
print(f"periodic points:      {sum(not pp.singular for pp in pts)} regular + "
      f"{sum(pp.singular for pp in pts)} cone point")
for pp in pts:
    print(f"  triangle {pp.point.tri}: ({pp.point.coords.x}, {pp.point.coords.y})"
          + ("  [cone point]" if pp.singular else ""))
