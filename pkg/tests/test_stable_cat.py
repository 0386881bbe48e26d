import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from kanspec.simplex_cat import SimplexMap, compose, face, identity, kan_K, normal_form
from kanspec.stable_cat import (
    CollageMorphism,
    CollageObject,
    StableMorphism,
    collage_compose,
    collage_hom,
    collage_identity,
    collage_shift,
    min_stabilization,
    rewrite,
    rho,
    st_compose,
    st_degeneracy,
    st_face,
    st_hom,
    st_identity,
    st_stabilize,
)


def _oracle(f, g):
    h_k = max(min_stabilization(f), min_stabilization(g), 0) + 8
    nf = normal_form(compose(st_stabilize(f, h_k), st_stabilize(g, h_k)))
    return nf.faces, nf.degens


def test_identity_law():
    f = StableMorphism(-2, -1, (3, 1), (0,))
    assert st_compose(st_identity(-2), f) == f
    assert st_compose(f, st_identity(-1)) == f


def test_face_then_degeneracy_at_negative_level():
    assert st_compose(st_face(0, 0), st_degeneracy(-1, 0)) == st_identity(-1)


def test_two_faces_normal_form():
    # value frozen from the stabilization oracle
    f, g = st_face(1, 2), st_face(2, 0)
    h = st_compose(f, g)
    assert (h.faces, h.degens) == _oracle(f, g) == ((3, 0), ())


def test_rewrite_terminates_with_step_bound():
    word = tuple(("d", 0) for _ in range(5)) + tuple(("s", 4 - k) for k in range(5))
    _, steps = rewrite(word)
    assert steps <= len(word) ** 3


def test_invariants():
    with pytest.raises(ValueError):
        StableMorphism(0, 0, (1,), ())
    with pytest.raises(ValueError):
        StableMorphism(0, 2, (0, 1), ())
    with pytest.raises(ValueError):
        st_compose(st_face(0, 0), st_face(0, 0))


def test_stabilize_examples():
    assert st_stabilize(st_identity(-2), 2) == identity(0)
    assert st_stabilize(StableMorphism(-1, 0, (0,)), 1) == face(1, 0)
    with pytest.raises(ValueError):
        st_stabilize(StableMorphism(-1, 0, (0,)), 0)


def test_stabilize_coherence_random():
    rng = random.Random(11)
    for _ in range(100):
        z = rng.randint(-3, 3)
        fs = tuple(sorted(rng.sample(range(7), rng.randint(0, 3)), reverse=True))
        ds = tuple(sorted(rng.sample(range(7), rng.randint(0, 3))))
        f = StableMorphism(z, z + len(fs) - len(ds), fs, ds)
        k = min_stabilization(f)
        assert st_stabilize(f, k + 1) == kan_K(st_stabilize(f, k))


def test_normal_forms_are_distinct():
    # faithfulness: distinct normal forms have distinct images in a common stage
    for z in (-2, 0, 1):
        for w in (z - 1, z, z + 1):
            ms = list(st_hom(z, w, 4))
            k = max(min_stabilization(m) for m in ms)
            images = {st_stabilize(m, k) for m in ms}
            assert len(images) == len(ms)


def test_hom_count_matches_pairs_of_subsets():
    for z, w in [(0, 0), (0, 1), (-1, -2), (2, 0)]:
        expected = sum(
            1
            for fs in range(6)
            for ds in range(6)
            if z + fs - ds == w
            for _ in combinations(range(5), fs)
            for _ in combinations(range(5), ds)
        )
        assert len(list(st_hom(z, w, 4))) == expected


def _words():
    dec = st.lists(st.integers(0, 8), max_size=4, unique=True).map(lambda xs: tuple(sorted(xs, reverse=True)))
    inc = st.lists(st.integers(0, 8), max_size=4, unique=True).map(lambda xs: tuple(sorted(xs)))
    return st.tuples(dec, inc)


@settings(max_examples=300)
@given(st.integers(-4, 4), _words(), _words())
def test_compose_agrees_with_stabilization(z, fw, gw):
    f = StableMorphism(z, z + len(fw[0]) - len(fw[1]), *fw)
    g = StableMorphism(f.tgt, f.tgt + len(gw[0]) - len(gw[1]), *gw)
    h = st_compose(f, g)
    assert (h.faces, h.degens) == _oracle(f, g)


@settings(max_examples=150)
@given(st.integers(-3, 3), _words(), _words(), _words())
def test_compose_associative(z, a, b, c):
    f = StableMorphism(z, z + len(a[0]) - len(a[1]), *a)
    g = StableMorphism(f.tgt, f.tgt + len(b[0]) - len(b[1]), *b)
    h = StableMorphism(g.tgt, g.tgt + len(c[0]) - len(c[1]), *c)
    assert st_compose(st_compose(f, g), h) == st_compose(f, st_compose(g, h))


def test_json_round_trip():
    f = StableMorphism(-1, 0, (4, 2), (1,))
    assert StableMorphism.from_json(f.to_json()) == f


# -- collage


def test_collage_identity_law():
    x, y = CollageObject(1, 0), CollageObject(1, -1)
    f = CollageMorphism(x, y, SimplexMap(2, 1, (0, 0, 1)))
    assert collage_compose(collage_identity(x), f) == f
    assert collage_compose(f, collage_identity(y)) == f
    assert f.witness.values == (0, 0, 1)


def test_collage_hom_size():
    assert len(collage_hom(CollageObject(1, 0), CollageObject(2, 0))) == 6
    assert collage_hom(CollageObject(1, -1), CollageObject(1, 0)) == []


def test_collage_invariants():
    with pytest.raises(ValueError):
        CollageObject(0, 1)
    with pytest.raises(ValueError):
        CollageMorphism(CollageObject(0, -1), CollageObject(0, 0), identity(0))


def test_collage_associativity_small():
    objs = [CollageObject(n, s) for n in range(2) for s in (0, -1, -2)]
    for a in objs:
        for b in objs:
            for c in objs:
                for d in objs:
                    for f in collage_hom(a, b):
                        for g in collage_hom(b, c):
                            for h in collage_hom(c, d)[:3]:
                                assert collage_compose(collage_compose(f, g), h) == collage_compose(f, collage_compose(g, h))


def test_rho_objects():
    assert rho(CollageObject(3, 0)) == 3
    assert rho(CollageObject(0, -2)) == -2


def test_rho_functorial_random():
    rng = random.Random(5)
    objs = [CollageObject(n, s) for n in range(3) for s in (0, -1, -2)]
    count = 0
    while count < 200:
        a, b, c = rng.choice(objs), rng.choice(objs), rng.choice(objs)
        fs, gs = collage_hom(a, b), collage_hom(b, c)
        if not fs or not gs:
            continue
        f, g = rng.choice(fs), rng.choice(gs)
        assert rho(collage_compose(f, g)) == st_compose(rho(f), rho(g))
        count += 1


def test_rho_stationary_along_shift():
    for n in range(3):
        for s in (0, -1, -2):
            x = CollageObject(n, s)
            assert rho(collage_shift(x)).is_identity
            assert rho(collage_shift(x).tgt) == rho(x)
