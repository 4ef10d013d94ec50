"""Count periodic points over a range of discriminants.

    python demos/sweep.py h2 5 8 12 13
    python demos/sweep.py prym-aminus 17 20
"""

import sys
import time

from veechpoints.cli import FAMILIES
from veechpoints.pipeline import Pipeline

family, discs = sys.argv[1], [int(a) for a in sys.argv[2:]]
for D in discs:
    s, gens = FAMILIES[family](D)
    t0 = time.perf_counter()
    P = Pipeline(s, gens)
    pts = P.periodic_points()
    print(f"{family} D={D}: {sum(not p.singular for p in pts)} regular + "
          f"{sum(p.singular for p in pts)} cone, {len(P.candidates())} candidates, "
          f"{time.perf_counter() - t0:.1f}s", flush=True)
