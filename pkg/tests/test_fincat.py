import json
import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from kanspec.fincat import (
    FiniteCategory,
    FiniteFunctor,
    chain,
    discrete,
    enumerate_categories,
    equivalent,
    find_isomorphism,
    free_on_graph,
    functor_category,
    functors,
    identity_functor,
    isomorphic,
    monoid,
    natural_transformations,
    parallel_pair,
    product_category,
    skeleton,
    terminal,
    walking_iso,
)

from oracles import labeled_category_classes

# counts by number of arrows, frozen from the exhaustive oracle
FROZEN = {
    (1, 4): {1: 1, 2: 2, 3: 7, 4: 35},
    (2, 5): {2: 1, 3: 3, 4: 16, 5: 77},
    (3, 6): {3: 1, 4: 3, 5: 20, 6: 111},
}


def _counts(k, m):
    return dict(Counter(C.n_arrows for C in enumerate_categories(k, m, min_objects=k)))


@pytest.mark.parametrize("k,m", [(1, 3), (2, 4), (3, 4)])
def test_enumeration_matches_oracle_live(k, m):
    assert _counts(k, m) == labeled_category_classes(k, m)


@pytest.mark.parametrize("km", sorted(FROZEN))
def test_enumeration_matches_frozen_oracle(km):
    assert _counts(*km) == FROZEN[km]


def test_enumeration_is_duplicate_free():
    cats = list(enumerate_categories(3, 5))
    for i, C in enumerate(cats):
        for D in cats[i + 1 :]:
            if (C.n_objects, C.n_arrows) == (D.n_objects, D.n_arrows):
                assert not isomorphic(C, D)


def test_isomorphism_finds_shuffled_copies():
    rng = random.Random(1)
    for C in enumerate_categories(3, 5):
        R = C.relabel()
        objs = list(R.objects)
        rng.shuffle(objs)
        P = FiniteCategory(objs, R.arrows, R.identities, R._comp)
        F = find_isomorphism(C, P)
        assert F is not None
        F.validate()


def test_isomorphism_rejects_opposites_that_differ():
    C = chain(2)
    assert isomorphic(C, C.opposite())
    cospan = free_on_graph([0, 1, 2], {"a": (0, 2), "b": (1, 2)})
    assert not isomorphic(cospan, cospan.opposite())


def test_equivalence_via_skeleton():
    assert equivalent(walking_iso(), terminal())
    assert not isomorphic(walking_iso(), terminal())
    assert skeleton(walking_iso()).n_objects == 1
    assert not equivalent(chain(2), terminal())


def test_constructors():
    assert chain(3).n_arrows == 6
    assert parallel_pair().n_arrows == 4
    assert discrete(range(3)).n_arrows == 3
    assert walking_iso().n_arrows == 4
    assert product_category(chain(2), chain(2)).n_objects == 4
    with pytest.raises(ValueError):
        monoid([[0, 1], [0, 0]])  # 0 is not a unit on the right of 1


def test_validation_rejects_non_associative_tables():
    # a three-element "monoid" whose table breaks associativity
    table = [[0, 1, 2], [1, 2, 2], [2, 1, 2]]
    with pytest.raises(ValueError):
        monoid(table)


def test_functor_counts():
    # functors between posets are monotone maps
    assert len(list(functors(chain(2), chain(3)))) == 6
    assert len(list(functors(chain(3), chain(2)))) == 4
    # every hom of the walking iso is a singleton, so only the objects matter
    assert len(list(functors(parallel_pair(), walking_iso()))) == 4
    assert len(list(functors(walking_iso(), chain(2)))) == 2


def test_functor_category_of_arrows():
    # natural transformations between monotone maps into a poset
    F = functor_category(chain(2), chain(2))
    assert F.n_objects == 3
    assert F.n_arrows == 6


def test_natural_transformations_to_self():
    C = chain(2)
    idf = identity_functor(C)
    assert len(list(natural_transformations(idf, idf))) == 1


def test_category_json_round_trip():
    for C in [chain(3), parallel_pair(), walking_iso(), monoid([[0, 1], [1, 1]])]:
        R = C.relabel()
        data = json.loads(json.dumps(R.to_json()))
        assert isomorphic(FiniteCategory.from_json(data), C)


def test_functor_json_round_trip():
    C, D = parallel_pair(), walking_iso()
    for F in functors(C, D):
        G = FiniteFunctor.from_json(json.loads(json.dumps(F.to_json())), C, D)
        assert G == F


def test_opposite_is_an_involution():
    for C in enumerate_categories(2, 4):
        assert C.opposite().opposite() == C


SMALL = list(enumerate_categories(3, 5))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_relabel_preserves_structure(seed):
    C = SMALL[seed % len(SMALL)]
    R = C.relabel()
    assert (R.n_objects, R.n_arrows) == (C.n_objects, C.n_arrows)
    assert isomorphic(R, C)
