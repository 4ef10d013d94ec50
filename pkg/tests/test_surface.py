import copy
import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import golden_l, prym, small_fractions, torus
from veechpoints.errors import SquareTiledUnsupported, ValidationError
from veechpoints.families import build_h2_eigenform, build_prym, square_torus
from veechpoints.geom import Mat2
from veechpoints.isomorphism import (find_translation_isomorphism, map_point, stabilizes)
from veechpoints.serialize import (canonical_dumps, load_surface, surface_from_json,
                                   surface_to_json)
from veechpoints.surface import SurfacePoint, TriangulatedSurface, canonical_point

F = Fraction


def mat(K, a, b, c, d):
    return Mat2(K(a), K(b), K(c), K(d))


# -- builders -------------------------------------------------------------------


def test_square_torus_file_loads(tmp_path):
    path = tmp_path / "torus.json"
    path.write_text(json.dumps(surface_to_json(torus())))
    s, gens = load_surface(path)
    assert gens is None
    assert len(s) == 2 and len(s.edge_pairs()) == 3
    assert s.cone_angles() == [1]


def test_mismatched_edges_name_the_pair():
    obj = surface_to_json(torus())
    obj["triangles"][1][2] = [[2, 1, 0, 1], [1, 1, 0, 1]]   # widen the upper triangle
    with pytest.raises(ValidationError) as info:
        surface_from_json(obj)
    # the offending gluing pair is reported as two half-edges
    where = info.value.where
    assert isinstance(where, tuple) and len(where) == 2 and all(len(h) == 2 for h in where)


def test_prym17_fixture_file():
    s, gens = load_surface(Path(__file__).parents[1] / "demos" / "data" / "prym_aplus_17.json")
    assert s.genus() == 3
    assert s.cone_angles() == [5]
    assert len(gens) == 4


@pytest.mark.parametrize("D", [5, 8, 12, 13, 17, 44])
def test_h2_builder(D):
    s, gens = build_h2_eigenform(D)
    assert gens is None
    assert s.genus() == 2
    assert s.cone_angles() == [3]


def test_builder_rejections():
    with pytest.raises(SquareTiledUnsupported):
        build_h2_eigenform(4)
    with pytest.raises(ValueError):
        build_prym(15)


@pytest.mark.parametrize("model", ["A+", "A-"])
def test_prym_builder(model):
    s, gens = build_prym(17, model)
    assert s.genus() == 3
    assert s.cone_angles() == [5]
    assert (gens is not None) == (model == "A+")


# -- matrices and isomorphisms --------------------------------------------------


def test_apply_matrix_identity_and_inverse(golden):
    K = golden.field
    assert golden.apply_matrix(Mat2.identity(K.one)) == golden
    g = Mat2(K.gen, K(1), K(3), (K(1) + 3) / K.gen)
    assert g.det() == 1
    assert golden.apply_matrix(g).apply_matrix(g.inverse()) == golden


def test_integer_shears_stabilize_torus():
    s = torus()
    K = s.field
    assert find_translation_isomorphism(s.apply_matrix(mat(K, 1, 2, 0, 1)), s) is not None
    assert find_translation_isomorphism(s.apply_matrix(mat(K, 1, 1, 0, 1)), s) is not None
    assert find_translation_isomorphism(s, s).is_identity()


def test_tori_of_different_area_are_not_isomorphic():
    s = torus()
    K = s.field
    big = TriangulatedSurface([[g @ v for v in tri] for tri, g in
                               zip(s.triangles, [mat(K, 1, 0, 0, 2)] * 2)], s.gluing, s.disc)
    assert find_translation_isomorphism(s, big) is None


def test_irrational_shear_does_not_stabilize_torus():
    s = torus()
    K = s.field
    assert not stabilizes(Mat2(K.one, K.gen, K.zero, K.one), s)


# -- points -----------------------------------------------------------------------


def test_canonical_point_cases(golden):
    s = golden
    K = s.field
    c = canonical_point(s.centroid(0), s)
    assert c == s.centroid(0)
    # midpoint of edge 1 (the diagonal) from both sides
    t, e = 0, 1
    u, f = s.gluing[(t, e)]
    a, b = s.triangles[t][e], s.triangles[t][(e + 1) % 3]
    p, q = s.triangles[u][f], s.triangles[u][(f + 1) % 3]
    half = K(F(1, 2))
    assert canonical_point(SurfacePoint(t, (a + b) * half), s) == canonical_point(SurfacePoint(u, (p + q) * half), s)
    # every corner names the one cone point
    corners = {canonical_point(SurfacePoint(t, s.triangles[t][k]), s) for t in range(len(s)) for k in range(3)}
    assert len(corners) == 1


def test_map_point_identity_and_inverse(prym17):
    s = prym17
    gens = prym(17)[1]
    p = canonical_point(s.centroid(3), s)
    assert map_point(Mat2.identity(s.field.one), p, s) == p
    for g in gens:
        assert map_point(g.inverse(), map_point(g, p, s), s) == p


# -- serialization ------------------------------------------------------------------


def _sheared(base, a: Fraction, b: Fraction):
    K = base.field
    g = Mat2(K.one, K(a), K.zero, K.one) @ Mat2(K.one, K.zero, K(b), K.one)
    return base.apply_matrix(g)


@settings(max_examples=200)
@given(st.sampled_from(["golden", "prym", "torus"]), small_fractions(-4, 4, 3), small_fractions(-4, 4, 3))
def test_json_round_trip_is_exact(which, a, b):
    base = {"golden": golden_l, "prym": lambda: prym(17)[0], "torus": torus}[which]()
    s = _sheared(base, a, b)
    gens = [Mat2(s.field.one, s.field(2), s.field.zero, s.field.one)]
    text = canonical_dumps(surface_to_json(s, gens))
    back, back_gens = surface_from_json(json.loads(text))
    assert back == s
    assert back_gens == gens
    assert canonical_dumps(surface_to_json(back, back_gens)) == text


@pytest.mark.parametrize("mutate", [
    lambda o: o.pop("gluings"),
    lambda o: o.__setitem__("disc", 4),
    lambda o: o["gluings"].pop(),
    lambda o: o["gluings"].append(list(o["gluings"][0])),
    lambda o: o["gluings"].__setitem__(0, [[0, 1], [0, 1]]),
    lambda o: o["triangles"][0].reverse(),
    lambda o: o["triangles"][0][0][0].__setitem__(1, 0),
])
def test_invalid_descriptions(mutate):
    obj = copy.deepcopy(surface_to_json(golden_l()))
    mutate(obj)
    with pytest.raises(ValidationError):
        surface_from_json(obj)


def test_flat_gluing_entries_accepted():
    obj = surface_to_json(golden_l())
    obj["gluing"] = [a + b for a, b in obj.pop("gluings")]
    assert surface_from_json(obj)[0] == golden_l()


def test_integers_accepted_as_field_elements():
    obj = surface_to_json(square_torus(3))
    obj["triangles"] = [[[x[0] if x[1] == 1 and x[2] == 0 else x for x in v] for v in tri]
                        for tri in obj["triangles"]]
    s, _ = surface_from_json(obj)
    assert s == square_torus(3)
