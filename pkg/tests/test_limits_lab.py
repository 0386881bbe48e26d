import json
import random

import pytest

from kanspec.fincat import (
    FiniteFunctor,
    chain,
    discrete,
    enumerate_categories,
    from_poset,
    identity_functor,
    isomorphic,
    parallel_pair,
    terminal,
    walking_iso,
)
from kanspec.limits_lab import (
    Diagram,
    check_spectrification_hypotheses,
    colimit_of,
    comma_category,
    comma_instance_from_json,
    comma_limit_check,
    compare_categories,
    cones,
    constant_diagram,
    fibrancy_counterexample,
    is_final,
    is_inverse,
    is_iso_fibration,
    lax_limit_explicit,
    limit_of,
    matching_diagram,
    oplax_limit_explicit,
    oplax_weight,
    preserves_limit,
    pseudo_limit,
    random_comma_instance,
    random_diagram,
    slice_category,
    sp_adjunction_check,
    strict_limit,
    terminal_weight,
    weighted_limit,
)


def _object(C, k):
    return FiniteFunctor(terminal(), C, {"*": k}, {("id", "*"): C.identity(k)})


def test_oplax_weight_sizes():
    W = oplax_weight(chain(2))
    assert [(W[j].n_objects, W[j].n_arrows) for j in (0, 1)] == [(1, 1), (2, 3)]
    # slices of the parallel pair: the target sees both arrows and its identity
    W = oplax_weight(parallel_pair())
    assert [W[j].n_objects for j in (0, 1)] == [1, 3]


def test_slice_category_of_chain():
    S = slice_category(chain(3), 2)
    assert S.n_objects == 3 and S.n_arrows == 6


def test_strict_limit_of_constant_diagram_is_the_value():
    for C in (chain(2), walking_iso(), parallel_pair()):
        assert isomorphic(strict_limit(constant_diagram(chain(2), C)), C)


def test_oplax_limit_of_constant_arrow_is_arrow_category():
    # oplax cones over one arrow with constant value C are arrows of C
    X = constant_diagram(chain(2), chain(2))
    for L in (oplax_limit_explicit(X), lax_limit_explicit(X)):
        # (0,0) <= (0,1) <= (1,1) as a poset
        assert (L.n_objects, L.n_arrows) == (3, 6)
        assert isomorphic(L, chain(3))


def test_terminal_weight_recovers_strict_limit():
    rng = random.Random(5)
    pool = list(enumerate_categories(2, 3))
    for J in list(enumerate_categories(2, 3))[:10]:
        X = random_diagram(rng, J, pool)
        assert compare_categories(strict_limit(X), weighted_limit(terminal_weight(J), X)).isomorphic


def test_oplax_weight_recovers_oplax_limit():
    rng = random.Random(9)
    pool = list(enumerate_categories(2, 3)) + [walking_iso()]
    for J in [chain(2), parallel_pair(), chain(3), discrete([0, 1])]:
        for _ in range(3):
            X = random_diagram(rng, J, pool)
            assert compare_categories(weighted_limit(oplax_weight(J), X), oplax_limit_explicit(X)).isomorphic


def test_fibrancy_counterexample():
    X = fibrancy_counterexample()
    assert strict_limit(X).n_objects == 0
    assert weighted_limit(X, X).n_objects == 1
    report = check_spectrification_hypotheses(X, X)
    assert report["fibrancy"] is False
    assert any("not an iso-fibration" in line for line in report.lines())


def test_pseudo_limit_flags_the_counterexample():
    L, report = pseudo_limit(fibrancy_counterexample())
    assert L.n_objects == 0 and not report.all_pass


def test_hypotheses_pass_for_constant_chain():
    J = chain(2)
    X = constant_diagram(J, chain(3))
    report = check_spectrification_hypotheses(terminal_weight(J), X)
    assert report.all_pass
    ok, msg = sp_adjunction_check(terminal_weight(J), X)
    assert ok, msg


def test_non_final_weight_is_flagged():
    J = chain(2)
    # the weight includes the bottom into the two-element chain: not final
    W = Diagram(J, {0: terminal(), 1: chain(2)}, {(0, 1): _object(chain(2), 0)})
    report = check_spectrification_hypotheses(W, constant_diagram(J, chain(2)))
    assert report["weight final"] is False


def test_report_json_is_serialisable():
    report = check_spectrification_hypotheses(fibrancy_counterexample(), fibrancy_counterexample())
    rows = json.loads(json.dumps(report.to_json()))
    assert {r["hypothesis"] for r in rows} >= {"fibrancy", "weight final"}


def test_is_final_examples():
    C = chain(2)
    assert is_final(identity_functor(C))
    assert is_final(_object(C, 1))
    assert not is_final(_object(C, 0))


def test_iso_fibration_examples():
    I = walking_iso()
    assert is_iso_fibration(identity_functor(I))
    assert not is_iso_fibration(_object(I, 0))
    assert is_iso_fibration(_object(chain(2), 0))


def test_inverse_shapes():
    assert is_inverse(chain(3)) and is_inverse(parallel_pair())
    assert not is_inverse(walking_iso())


def test_matching_diagram_of_parallel_pair():
    M, Y = matching_diagram(fibrancy_counterexample(), 0)
    assert M.n_objects == 2 and M.n_arrows == 2
    assert [Y[m].n_objects for m in M.objects] == [2, 2]


def test_limits_in_a_poset():
    C = from_poset(range(4), lambda a, b: a <= b)
    pair = FiniteFunctor(discrete([0, 1]), C, {0: 1, 1: 3}, {("id", 0): (1, 1), ("id", 1): (3, 3)})
    apex, _ = limit_of(pair)
    assert apex == 1
    apex, _ = colimit_of(pair)
    assert apex == 3
    assert len(cones(pair, 0)) == 1 and cones(pair, 2) == []


def test_missing_limit():
    # the discrete two-object category has no product of its objects
    D = discrete([0, 1])
    pair = FiniteFunctor(D, D, {0: 0, 1: 1}, {("id", 0): ("id", 0), ("id", 1): ("id", 1)})
    assert limit_of(pair) is None
    assert preserves_limit(identity_functor(D), pair)


def test_comma_category_identity_is_arrow_category():
    C = chain(2)
    K = comma_category(identity_functor(C), identity_functor(C))
    assert K.n_objects == 3


def test_comma_formula_random():
    rng = random.Random(13)
    for _ in range(20):
        L, R, D = random_comma_instance(rng)
        rep = comma_limit_check(L, R, D)
        assert not rep.skipped, rep.reason
        assert rep.agree, rep.reason


def test_comma_instance_json():
    data = {
        "A": chain(2).relabel().to_json(),
        "B": chain(2).relabel().to_json(),
        "C": chain(2).relabel().to_json(),
    }
    C = chain(2).relabel()
    ident = {"objects": {a: a for a in C.objects}, "arrows": {f: f for f in C.arrows if not C.is_identity(f)}}
    data.update({"L": ident, "R": ident, "shape": discrete(["i"]).relabel().to_json()})
    shape = discrete(["i"]).relabel()
    (i,) = shape.objects
    top = C.objects[-1]
    data["diagram"] = {"objects": {i: {"a": top, "c": C.identity(top), "b": top}}}
    L, R, D = comma_instance_from_json(json.loads(json.dumps(data)))
    assert comma_limit_check(L, R, D).agree
    data["diagram"]["objects"][i]["a"] = "nowhere"
    with pytest.raises(ValueError):
        comma_instance_from_json(data)


def test_diagram_json_round_trip():
    X = fibrancy_counterexample()
    Y = Diagram.from_json(json.loads(json.dumps(X.to_json())))
    assert strict_limit(Y).n_objects == 0
    assert weighted_limit(Y, Y).n_objects == 1


def test_diagram_validation():
    J = chain(2)
    with pytest.raises(ValueError):
        Diagram(J, {0: chain(2), 1: terminal()}, {(0, 1): identity_functor(chain(2))})
