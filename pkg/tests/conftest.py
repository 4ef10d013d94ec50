import os
from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from veechpoints.families import build_h2_eigenform, build_prym, square_torus, triangulate_rectangle
from veechpoints.geom import Mat2, Vec
from veechpoints.numfield import Quad, QuadField
from veechpoints.surface import TriangulatedSurface

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.register_profile("ci", parent=settings.get_profile("default"), max_examples=50)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def small_fractions(lo=-12, hi=12, max_den=6):
    return st.builds(Fraction, st.integers(lo, hi), st.integers(1, max_den))


def quads(d=5, **kw):
    return st.builds(lambda a, b: Quad(a, b, d), small_fractions(**kw), small_fractions(**kw))


def nonzero_quads(d=5, **kw):
    return quads(d, **kw).filter(bool)


@lru_cache(maxsize=None)
def golden_l():
    return build_h2_eigenform(5)[0]


@lru_cache(maxsize=None)
def h2(D):
    return build_h2_eigenform(D)[0]


@lru_cache(maxsize=None)
def prym(D, model="A+"):
    return build_prym(D, model)


@lru_cache(maxsize=None)
def torus():
    return square_torus()


def shear(K, a=0, b=0):
    return Mat2(K.one, K(a), K.zero, K.one) @ Mat2(K.one, K.zero, K(b), K.one)


BASES = {
    "torus": lambda: torus(),
    "golden": lambda: golden_l(),
    "h2-8": lambda: h2(8),
    "prym17": lambda: prym(17)[0],
    "prym17-": lambda: prym(17, "A-")[0],
}


@st.composite
def sheared_surfaces(draw, names=tuple(BASES)):
    base = BASES[draw(st.sampled_from(names))]()
    K = base.field
    g = Mat2.identity(K.one)
    for _ in range(draw(st.integers(1, 3))):
        g = g @ shear(K, draw(small_fractions(-3, 3, 3)), draw(small_fractions(-3, 3, 3)))
    return base, base.apply_matrix(g)


@pytest.fixture
def golden():
    return golden_l()


@pytest.fixture
def prym17():
    return prym(17, "A+")[0]


def square_tiled(rights, ups, d=2):
    """Unit squares; ``rights[i]`` is right of square ``i`` and ``ups[i]`` above it.

    Square ``i`` sits at ``(i, 0)`` in the plane; only the gluing matters.
    """
    K = QuadField(d)
    n = len(rights)
    downs = {u: i for i, u in enumerate(ups)}
    tris = []
    for i in range(n):
        tris.extend(triangulate_rectangle(Vec(K(i), K.zero), K.one, K.one))
    gluing = {}
    for i in range(n):
        lo, up = 2 * i, 2 * i + 1
        pairs = [((lo, 1), (up, 1)), ((lo, 0), (2 * rights[i] + 1, 0)), ((lo, 2), (2 * downs[i] + 1, 2))]
        for a, b in pairs:
            gluing[a] = b
            gluing[b] = a
    return TriangulatedSurface(tris, gluing, d, name="square-tiled")
