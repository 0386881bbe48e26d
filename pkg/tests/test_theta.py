import json
import random
from itertools import product

import pytest

from kanspec.fincat import chain, enumerate_categories, monoid, parallel_pair, terminal, walking_iso
from kanspec.simplex_cat import SimplexMap, compose as simplex_compose, hom as simplex_hom
from kanspec.theta import (
    POINT,
    CellularSet,
    GammaMorphism,
    PastingDiagram,
    ThetaCell,
    ThetaMorphism,
    attach_duplicate_filler,
    cells_of_degree,
    classify,
    compose,
    factorizations,
    find_section,
    gamma_compose,
    gamma_hom,
    gamma_identity,
    globe_cell,
    globe_category,
    globe_inclusions,
    horn,
    hyperfaces,
    image,
    inner_horn_regulus,
    inner_horns,
    intersection,
    is_iso,
    is_minus,
    is_plus,
    lifting_counts,
    nerve_of_category,
    orthogonal_to,
    pasting_diagram_of,
    random_cell,
    random_morphism,
    reedy_degree,
    representable,
    segal_check,
    shift_S,
    simplex_cell,
    simplex_morphism,
    simplex_to_gamma,
    spine,
    spine_regulus,
    theta_hom,
    theta_identity,
    wreath_compose,
)

# -- Gamma


def test_gamma_hom_size():
    # each of the m target points has k+1 owners
    for k, m in product(range(4), repeat=2):
        assert len(gamma_hom(k, m)) == (k + 1) ** m


def test_gamma_associative_and_unital():
    homs = {(a, b): gamma_hom(a, b) for a in range(3) for b in range(3)}
    for (a, b), fs in homs.items():
        for f in fs:
            assert gamma_compose(gamma_identity(a), f) == f == gamma_compose(f, gamma_identity(b))
            for c in range(3):
                for g in homs[(b, c)]:
                    for h in homs[(c, 2)]:
                        assert gamma_compose(gamma_compose(f, g), h) == gamma_compose(f, gamma_compose(g, h))


def test_gamma_rejects_overlapping_parts():
    with pytest.raises(ValueError):
        GammaMorphism(2, 2, (frozenset({1}), frozenset({1, 2})))


def test_simplex_to_gamma_is_a_functor():
    for n, m, k in product(range(3), repeat=3):
        for f in simplex_hom(n, m):
            for g in simplex_hom(m, k):
                lhs = simplex_to_gamma(simplex_compose(f, g))
                assert lhs == gamma_compose(simplex_to_gamma(f), simplex_to_gamma(g))
    assert simplex_to_gamma(SimplexMap(1, 3, (0, 2))).parts == (frozenset({1, 2}),)


# -- cells and degree


def test_cell_shapes():
    assert repr(simplex_cell(3)) == "[3]"
    assert repr(globe_cell(2)) == "[1];([1])"
    assert reedy_degree(POINT) == 0
    assert reedy_degree(simplex_cell(3)) == 3
    assert reedy_degree(globe_cell(3)) == 3
    assert reedy_degree(ThetaCell([simplex_cell(2), POINT])) == 4


def test_cells_of_degree_counts():
    # planar rooted trees with d edges: Catalan numbers
    assert [len(cells_of_degree(d)) for d in range(6)] == [1, 1, 2, 5, 14, 42]
    for d in range(5):
        assert all(reedy_degree(T) == d for T in cells_of_degree(d))


def test_cell_json_round_trip():
    rng = random.Random(2)
    for _ in range(30):
        T = random_cell(rng)
        assert ThetaCell.from_json(json.loads(json.dumps(T.to_json()))) == T
    with pytest.raises(ValueError):
        ThetaCell.from_json("x")


def test_pasting_diagrams():
    assert pasting_diagram_of(simplex_cell(2)).dims == (1, 0, 1)
    assert pasting_diagram_of(ThetaCell([simplex_cell(2)])).dims == (2, 1, 2)
    assert pasting_diagram_of(globe_cell(3)).globes == (3,)
    assert shift_S(PastingDiagram((1, 0, 1))) == PastingDiagram((2, 1, 2))
    with pytest.raises(ValueError):
        PastingDiagram((1, 2, 1))


def test_globe_category_relations():
    G = globe_category(2)
    s01, t01, s12, t12 = ("s", 0, 1), ("t", 0, 1), ("s", 1, 2), ("t", 1, 2)
    # whichever boundary comes first decides
    assert G.then(s01, s12) == G.then(s01, t12) != G.then(t01, s12)
    assert G.then(t01, s12) == G.then(t01, t12)
    assert len(G.hom(0, 2)) == 2


# -- morphisms


def test_theta_hom_of_simplices_matches_delta():
    for n, m in product(range(4), repeat=2):
        assert len(theta_hom(simplex_cell(n), simplex_cell(m))) == len(list(simplex_hom(n, m)))


def test_theta_hom_globe_example():
    # [1] -> [1];([1]): the base, then a vertex of the inner interval when the base is the identity
    assert len(theta_hom(simplex_cell(1), globe_cell(2))) == 2 + 2


def test_identity_and_validation():
    rng = random.Random(5)
    for _ in range(30):
        S, T = random_cell(rng), random_cell(rng)
        f = random_morphism(rng, S, T).validate()
        assert compose(theta_identity(S), f) == f == compose(f, theta_identity(T))
    with pytest.raises(ValueError):
        ThetaMorphism(simplex_cell(1), simplex_cell(1), (1, 0), ((),)).validate()


def test_morphism_json_round_trip():
    rng = random.Random(6)
    for _ in range(20):
        f = random_morphism(rng, random_cell(rng), random_cell(rng))
        assert ThetaMorphism.from_json(json.loads(json.dumps(f.to_json()))) == f


def test_wreath_associativity_random():
    rng = random.Random(200)
    for _ in range(200):
        A, B, C, D = (random_cell(rng, 2, 3) for _ in range(4))
        f, g, h = random_morphism(rng, A, B), random_morphism(rng, B, C), random_morphism(rng, C, D)
        assert wreath_compose(h, wreath_compose(g, f)) == wreath_compose(wreath_compose(h, g), f)


# -- plus and minus


@pytest.mark.parametrize("d", range(4))
def test_fast_classification_matches_semantic(d):
    for S in [T for k in range(d + 1) for T in cells_of_degree(k)]:
        for T in cells_of_degree(d):
            for f in theta_hom(S, T):
                assert classify(f) == classify(f, "semantic"), f


def test_minus_matches_section_search():
    for d in range(4):
        for S in [T for k in range(4) for T in cells_of_degree(k)]:
            for T in cells_of_degree(d):
                for f in theta_hom(S, T):
                    assert is_minus(f) == (find_section(f) is not None)


def test_degree_strictly_moves_along_classes():
    for S in [T for k in range(5) for T in cells_of_degree(k)]:
        for T in [T for k in range(5) for T in cells_of_degree(k)]:
            for f in theta_hom(S, T):
                if is_iso(f):
                    assert S == T
                elif is_plus(f):
                    assert reedy_degree(S) < reedy_degree(T)
                elif is_minus(f):
                    assert reedy_degree(S) > reedy_degree(T)


def test_classify_rejects_unknown_method():
    with pytest.raises(ValueError):
        classify(theta_identity(POINT), "guess")


def test_factorization_unique_up_to_iso():
    rng = random.Random(12)
    for _ in range(15):
        S, T = random_cell(rng, 2, 2), random_cell(rng, 2, 2)
        f = random_morphism(rng, S, T)
        facts = factorizations(f)
        assert facts
        middles = {e.tgt for e, _ in facts}
        assert len(middles) == 1


# -- hyperfaces, horns, spines


def test_hyperfaces_of_simplices():
    for n in range(1, 4):
        assert len(hyperfaces(simplex_cell(n))) == n + 1
    assert len(inner_horns(simplex_cell(2))) == 1


def test_hyperfaces_of_globe():
    # [1];([1]): the two endpoints of the inner interval; collapsed bases are not injective
    assert len(hyperfaces(globe_cell(2))) == 2


def test_intersection_of_inner_faces_is_two_points():
    T = globe_cell(2)
    d0 = ThetaMorphism(globe_cell(1), T, (0, 1), ((simplex_morphism((1,), 1),),))
    d1 = ThetaMorphism(globe_cell(1), T, (0, 1), ((simplex_morphism((0,), 1),),))
    I = intersection(image(d0, 2), image(d1, 2))
    assert len(I.elements(POINT)) == 2
    assert I.elements(globe_cell(1)) == [] or all(not is_plus(x) for x in I.elements(globe_cell(1)))


def test_horn_and_spine_are_proper_subobjects():
    T = simplex_cell(2)
    (k,) = inner_horns(T)
    H, Sp, R = horn(T, k), spine(T), representable(T, 2)
    for U in cells_of_degree(1):
        assert set(Sp.elements(U)) <= set(H.elements(U)) <= set(R.elements(U))
    assert len(H.elements(simplex_cell(1))) < len(R.elements(simplex_cell(1)))
    with pytest.raises(ValueError):
        horn(T, theta_identity(T))


def test_globe_inclusions():
    assert len(globe_inclusions(simplex_cell(3))) == 3
    assert len(globe_inclusions(globe_cell(2))) == 1
    assert all(is_plus(g) for g in globe_inclusions(ThetaCell([simplex_cell(2), POINT])))


# -- nerves and Segal


@pytest.mark.parametrize("C", [terminal(), chain(3), parallel_pair(), walking_iso(), monoid([[0, 1], [1, 1]])])
def test_nerves_are_segal(C):
    X = nerve_of_category(C, 4)
    assert segal_check(X, 4)
    sorts = [T for T in X.sorts if reedy_degree(T) <= 4]
    assert orthogonal_to(X, spine_regulus(4, sorts), 4)


def test_nerve_counts():
    X = nerve_of_category(chain(2), 3)
    # composable strings of length n in a two-object chain
    assert [len(X.elements(simplex_cell(n))) for n in range(4)] == [2, 3, 4, 5]


def test_small_nerves_validate():
    nerve_of_category(chain(2), 2).validate()


def test_nerves_of_small_categories_pass():
    for C in enumerate_categories(2, 4):
        X = nerve_of_category(C, 3)
        assert segal_check(X, 3)


def test_inner_horn_orthogonality_of_nerve():
    X = nerve_of_category(chain(3), 3)
    sorts = [T for T in X.sorts if reedy_degree(T) <= 3]
    assert orthogonal_to(X, inner_horn_regulus(3, sorts), 3)


def test_duplicate_filler_breaks_segal():
    X = nerve_of_category(chain(2), 4)
    top = X.elements(simplex_cell(2))
    Y = attach_duplicate_filler(X, top[-1])
    assert not segal_check(Y, 4)
    sorts = [T for T in Y.sorts if reedy_degree(T) <= 4]
    assert not orthogonal_to(Y, spine_regulus(4, sorts), 4)


def test_lifting_counts_see_the_duplicate():
    X = nerve_of_category(chain(2), 2)
    Y = attach_duplicate_filler(X, X.elements(simplex_cell(2))[0])
    (entry,) = spine_regulus(2, [simplex_cell(2)])
    assert max(lifting_counts(Y, entry, 2).values()) == 2
    assert set(lifting_counts(X, entry, 2).values()) == {1}


def test_segal_bound_checked():
    with pytest.raises(ValueError):
        segal_check(nerve_of_category(chain(2), 1), 1)


def test_cellular_json_round_trip():
    X = nerve_of_category(chain(2), 2)
    data = json.loads(json.dumps(X.to_json()))
    Y = CellularSet.from_json(data)
    assert Y.to_json() == data
    assert segal_check(Y, 2)


def _in_spine(f):
    """Base inside one interval and every component in the spine of that child."""
    T = f.tgt
    if not T:
        return True
    lo, hi = min(f.base), max(f.base)
    if hi - lo > 1:
        return False
    return all(_in_spine(c) for fam in f.components for c in fam)


def test_spine_matches_interval_description_up_to_degree_five():
    for T in [T for d in range(1, 6) for T in cells_of_degree(d)]:
        Sp = spine(T)
        for U in Sp.sorts:
            members = set(Sp.elements(U))
            assert members == {f for f in theta_hom(U, T) if _in_spine(f)}, (U, T)
