import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from kanspec.ez import BASE
from kanspec.psh_pointed import (
    PointedMap,
    PointedSSet,
    adjunct,
    ckp_omega,
    ckp_space,
    constant_map,
    hom_pointed,
    identity_map,
    is_iso,
    isomorphic,
    omega_K,
    point,
    pushout,
    random_pointed_sset,
    representable_plus,
    sigma_K,
    sigma_map,
    unit_eta,
    wedge,
    wedge_inclusions,
)


def circle():
    return sigma_K(representable_plus(0))


def test_wedge_of_nothing_is_point():
    assert wedge([]).is_point()


def test_representable_plus_one():
    X = representable_plus(1)
    assert sorted(X.level(c) for c in X.cells) == [0, 0, 1]
    assert X.count(0) == 3  # two vertices and the basepoint


def test_ckp_pushout_shape():
    X = ckp_space()
    assert sorted(X.level(c) for c in X.cells) == [0, 1]
    (edge,) = X.cells_at(1)
    assert X.face(1, ((), edge)) is BASE
    assert X.face(0, ((), edge)) is not BASE


def test_sigma_point_and_circle():
    assert sigma_K(point()).is_point()
    S1 = circle()
    (c,) = S1.cells
    assert S1.level(c) == 1
    assert S1.face_table(c) == (BASE, BASE)


@pytest.mark.parametrize("E", [1, 2, 3, 5])
def test_sigma_of_wedge_of_points_is_wedge_of_circles(E):
    Y = sigma_K(wedge([representable_plus(0)] * E))
    assert len(Y.cells_at(1)) == E and len(Y.cells) == E
    assert all(Y.face_table(c) == (BASE, BASE) for c in Y.cells)


def test_sigma_cell_formula():
    X = representable_plus(1)
    Y = sigma_K(X)
    assert sorted(Y.level(c) for c in Y.cells) == [1, 1, 2]
    for c in Y.cells_at(2):
        assert Y.face_table(c)[2] is BASE


def test_omega_examples():
    assert omega_K(point()).is_point()
    assert isomorphic(omega_K(circle()), representable_plus(0))


def test_ckp_counts():
    X = ckp_space()
    assert ckp_omega(X).count(0) == 2
    assert omega_K(X).count(0) == 1
    assert len(hom_pointed(representable_plus(0), ckp_omega(X))) == 2
    assert len(hom_pointed(representable_plus(0), omega_K(X))) == 1
    assert ckp_omega(point()).is_point()


def test_hom_pointed_examples():
    X = representable_plus(2)
    assert len(hom_pointed(point(), X)) == 1
    assert len(hom_pointed(representable_plus(0), X)) == X.count(0)
    assert len(hom_pointed(representable_plus(1), circle())) == 2


def test_hom_pointed_duplicate_free():
    maps = hom_pointed(representable_plus(1), sigma_K(representable_plus(1)))
    assert len(maps) == len({m for m in maps})


def test_unit_examples():
    assert is_iso(unit_eta(point()))
    assert is_iso(unit_eta(representable_plus(2)))


def test_unit_iso_on_random_corpus():
    rng = random.Random(2024)
    for _ in range(100):
        X = random_pointed_sset(rng, max_cells=8, max_dim=3)
        assert is_iso(unit_eta(X))


def test_adjunction_bijection_random():
    rng = random.Random(7)
    for _ in range(12):
        A = random_pointed_sset(rng, max_cells=4, max_dim=2)
        X = random_pointed_sset(rng, max_cells=5, max_dim=2)
        left = hom_pointed(sigma_K(A), X)
        right = hom_pointed(A, omega_K(X))
        assert len(left) == len(right)
        transposed = {adjunct(A, f) for f in left}
        assert len(transposed) == len(right) and transposed <= set(right)


def test_omega_level_formula_matches_representable_homs():
    rng = random.Random(3)
    for _ in range(10):
        X = random_pointed_sset(rng, max_cells=6, max_dim=3)
        OX = omega_K(X)
        for n in range(2):
            assert OX.count(n) == len(hom_pointed(sigma_K(representable_plus(n)), X))


def test_sigma_preserves_wedges():
    rng = random.Random(9)
    for _ in range(10):
        A = random_pointed_sset(rng, max_cells=4, max_dim=2)
        B = random_pointed_sset(rng, max_cells=4, max_dim=2)
        assert isomorphic(sigma_K(wedge([A, B])), wedge([sigma_K(A), sigma_K(B)]))


def test_sigma_preserves_pushouts():
    D0, D1 = representable_plus(0), representable_plus(1)
    f = PointedMap(D0, D1, {"0": ((), "0")})
    g = PointedMap(D0, D1, {"0": ((), "1")})
    P, _, _ = pushout(f, g)
    SP, _, _ = pushout(sigma_map(f), sigma_map(g))
    assert isomorphic(sigma_K(P), SP)


def test_pushout_rejects_mismatched_span():
    D0, D1 = representable_plus(0), representable_plus(1)
    f = PointedMap(D0, D1, {"0": ((), "0")})
    g = identity_map(D1)
    with pytest.raises(ValueError):
        pushout(f, g)


def test_map_validation():
    D0, D1 = representable_plus(0), representable_plus(1)
    with pytest.raises(ValueError):
        PointedMap(D1, D0, {"0": ((), "0"), "1": ((), "0"), "0.1": ((), "0")})
    assert constant_map(D1, D0).then(identity_map(D0)).assignment == constant_map(D1, D0).assignment


def test_json_round_trip():
    rng = random.Random(1)
    for _ in range(20):
        X = random_pointed_sset(rng)
        Y = PointedSSet.from_json(json.loads(json.dumps(X.to_json())))
        assert Y == X


def test_json_rejects_bad_faces():
    with pytest.raises(ValueError):
        PointedSSet.from_json({"cells": [{"id": "e", "dim": 1, "faces": [{"i": 1, "word": [], "cell": "*"}]}]})


def test_wedge_inclusions_are_monos():
    W, incs = wedge_inclusions([representable_plus(1), circle()])
    assert all(i.is_mono for i in incs)
    assert len(W) == 4


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_constructed_objects_validate(seed):
    X = random_pointed_sset(random.Random(seed), max_cells=6, max_dim=2)
    sigma_K(X).validate()
    omega_K(X).validate()
    ckp_omega(X).validate()
