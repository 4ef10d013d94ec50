"""Exact computation of periodic points on non-square-tiled Veech surfaces."""

from .errors import (CapExceeded, NotPeriodicDirection, NotVeechData, SquareTiledUnsupported,
                     ValidationError, VeechPointsError)
from .geom import Mat2, Vec
from .numfield import Quad, QuadField
from .surface import SurfacePoint, TriangulatedSurface, canonical_point

__version__ = "0.1.0"
