from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import golden_l, prym, sheared_surfaces, square_tiled, torus
from veechpoints.cylinders import check_nonsquare_tiled, decompose, regions, shear_images
from veechpoints.delaunay import make_delaunay
from veechpoints.geom import Mat2, Vec
from veechpoints.isomorphism import stabilizes


def axis(s, vertical=False):
    K = s.field
    return Vec(K.zero, K.one) if vertical else Vec(K.one, K.zero)


def both(s):
    hd = decompose(s, axis(s))
    vd = decompose(s, axis(s, True))
    fixed, hist = make_delaunay(s)
    return hd, vd, regions(hd, vd, fixed, hist)


def test_torus_horizontal():
    s = torus()
    K = s.field
    dec = decompose(s, axis(s))
    assert len(dec.cylinders) == 1
    cyl = dec.cylinders[0]
    assert (cyl.circumference, cyl.height, cyl.modulus, dec.t) == (K.one, K.one, K.one, K.one)
    assert dec.parabolic == Mat2(K.one, K.one, K.zero, K.one)


def test_two_cylinders_with_moduli_half_and_third():
    # a 3x1 row of squares under a 2x1 row
    s = square_tiled([1, 2, 0, 4, 3], [3, 4, 2, 0, 1])
    K = s.field
    dec = decompose(s, axis(s))
    assert dec.t == 6
    by_modulus = {c.modulus: c.multiplicity for c in dec.cylinders}
    assert by_modulus == {K(1) / 2: 3, K(1) / 3: 2}
    assert dec.parabolic == Mat2(K.one, K(6), K.zero, K.one)


def test_prym17_horizontal_parabolic():
    s = prym(17)[0]
    K = s.field
    assert decompose(s, axis(s)).parabolic == Mat2(K.one, K(2), K.zero, K.one)


def test_torus_regions_and_shears():
    hd, vd, regs = both(torus())
    assert len(regs) == 1
    r = regs[0]
    assert r.width == 1 and r.height == 1
    assert [o.offset for o in shear_images(hd, regs, r)] == [0, 1]


def test_two_horizontal_one_vertical():
    # a 1x2 torus whose two square rows are separate horizontal cylinders
    s = square_tiled([0, 1], [1, 0])
    hd, vd, regs = both(s)
    assert (len(hd.cylinders), len(vd.cylinders)) == (2, 1)
    assert len(regs) == 2
    assert sum(r.height for r in regs) == vd.cylinders[0].circumference
    assert sum(r.area for r in regs) == s.area()


def test_prym17_regions_and_occurrence_range():
    s = prym(17)[0]
    hd, vd, regs = both(s)
    assert sum(r.area for r in regs) == s.area()
    for r in regs:
        cyl = hd.cylinders[r.hcyl]
        for occ in shear_images(hd, regs, r):
            assert 0 <= occ.offset < (cyl.multiplicity + 1) * cyl.circumference


def test_nonsquare_tiled_check():
    for s, expected in ((torus(), False), (golden_l(), True), (prym(17)[0], True)):
        hd, vd, _ = both(s)
        assert check_nonsquare_tiled(s, hd, vd) is expected


@settings(max_examples=1000)
@given(sheared_surfaces(("torus", "golden", "h2-8", "prym17", "prym17-")), st.integers(0, 50))
def test_decomposition_properties(pair, pick):
    _, s = pair
    d, _ = make_delaunay(s)
    edges = [e for t in range(len(d)) for e in d.edges(t)]
    w = edges[pick % len(edges)]
    dec = decompose(s, w)
    # cylinders tile the surface
    assert sum((c.area for c in dec.cylinders), s.field.zero) == s.area()
    for c in dec.cylinders:
        assert c.multiplicity >= 1
        assert c.modulus * dec.t == c.multiplicity
    assert dec.parabolic.det() == 1 and dec.parabolic.trace() == 2
    assert not (dec.parabolic @ w).cross(w)
    assert stabilizes(dec.parabolic, s)
