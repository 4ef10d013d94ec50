from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import prym
from oracles import involution_fixed_points
from veechpoints.geom import Vec
from veechpoints.isomorphism import AffineMap
from veechpoints.orbit import reduce_candidates, verify_orbits
from veechpoints.surface import SurfacePoint, canonical_point

ZERO = Fraction(0)


def pt(i):
    return SurfacePoint(i, Vec(ZERO, ZERO))


@st.composite
def permutation_systems(draw):
    """A finite universe, a few permutations of it and a candidate subset."""
    n = draw(st.integers(1, 14))
    k = draw(st.integers(0, 4))
    perms = [draw(st.permutations(range(n))) for _ in range(k)]
    cands = draw(st.sets(st.integers(0, n - 1)))
    return n, perms, cands


def as_map(perm):
    return lambda p: pt(perm[p.tri])


def closed_orbits(perms, cands):
    """Brute force: candidates whose whole orbit stays inside the candidate set."""
    keep = set()
    for c in cands:
        orbit, frontier = {c}, [c]
        while frontier:
            x = frontier.pop()
            for perm in perms:
                y = perm[x]
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        if orbit <= cands:
            keep.add(c)
    return keep


def inverse(perm):
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return inv


@settings(max_examples=1000)
@given(permutation_systems(), st.randoms(use_true_random=False))
def test_reduce_matches_brute_force(system, rnd):
    n, perms, cands = system
    maps = [as_map(p) for p in perms]
    res = reduce_candidates([pt(c) for c in cands], maps)
    kept = {p.tri for p in res.points}
    assert kept == closed_orbits(perms, cands)
    # closed under every generator
    assert all(f(p) in set(res.points) for f in maps for p in res.points)
    assert verify_orbits(res.points, maps, 3)
    # components are exactly the orbits
    for comp in res.components:
        tris = {p.tri for p in comp}
        assert closed_orbits(perms, tris) == tris
    # generator order and inverse augmentation do not change the answer
    shuffled = list(perms)
    rnd.shuffle(shuffled)
    augmented = shuffled + [inverse(p) for p in perms]
    for variant in (shuffled, augmented):
        again = reduce_candidates([pt(c) for c in cands], [as_map(p) for p in variant])
        assert again.points == res.points
        assert again.components == res.components


def test_escaping_point_is_dropped():
    perm = [1, 0, 3, 2]
    res = reduce_candidates([pt(0), pt(1), pt(2)], [as_map(perm)])
    assert [p.tri for p in res.points] == [0, 1]
    assert not verify_orbits([pt(2)], [as_map(perm)], 1)


def test_prym_fixed_points_survive_generators():
    s, gens = prym(17)
    maps = [AffineMap(s, g) for g in gens]
    fixed = [canonical_point(SurfacePoint(t, c), s) for t, c in involution_fixed_points(s)]
    res = reduce_candidates(fixed, maps)
    assert set(res.points) == set(fixed)
    assert verify_orbits(res.points, maps, 2)
    # a generic point runs away under the first generator
    K = s.field
    c = s.centroid(0)
    generic = canonical_point(SurfacePoint(0, c.coords + Vec(K.gen / 97, K(Fraction(1, 89)))), s)
    assert generic not in fixed and maps[0](generic) not in fixed
    res = reduce_candidates(fixed + [generic], maps)
    assert set(res.points) == set(fixed)
