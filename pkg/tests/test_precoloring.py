import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from p6color.errors import InvalidInstance
from p6color.graph_core import Graph, is_pt_free
from p6color.lists import cmask
from p6color.oracle_gen import GenParams, brute_force_extension, gen_excellent
from p6color.precoloring import (ROLE_PAIRS, StarredPrecoloring, check_extension, coloring_from_json,
                                 coloring_to_json, from_json, is_normalized, move_to_seed, normalize,
                                 stage_predicate, to_json, validate, violation)

# seed path 0-1-2 coloured 3,4,2; x3 sees colours 3,4 (list {1,2}); x4 sees
# 4,2 (list {1,3}); the Y* component {5,6} is complete to both X vertices.
BASE_EDGES = [(0, 1), (1, 2), (3, 0), (3, 1), (4, 1), (4, 2), (5, 6), (3, 5), (3, 6), (4, 5), (4, 6)]
BASE_F = {0: 3, 1: 4, 2: 2}


def base(edges=BASE_EDGES, n=7, S=(0, 1, 2), X0=(), X=(3, 4), Y=(5, 6), f=BASE_F):
    return StarredPrecoloring(Graph(n, edges), list(S), list(X0), list(X), list(Y), dict(f))


def without(edge):
    return [e for e in BASE_EDGES if e != edge]


def test_base_is_valid_and_listed():
    p = base()
    validate(p)
    assert p.mp[3] == cmask([1, 2]) and p.mp[4] == cmask([1, 3])
    assert is_normalized(p)


@pytest.mark.parametrize("build,axiom", [
    (lambda: base(Y=(5, 6, 0)), "B"),
    (lambda: base(Y=(5,)), "B"),
    (lambda: base(f={0: 3, 1: 4}), "A"),
    (lambda: base(f={0: 3, 1: 3, 2: 2}), "A"),
    (lambda: base(f={0: 3, 1: 4, 2: 7}), "A"),
    (lambda: base(edges=without((1, 2)) + [(4, 0)]), "C"),
    (lambda: base(edges=BASE_EDGES + [(3, 2)]), "C"),
    (lambda: base(edges=without((4, 2))), "D"),
    (lambda: base(edges=without((3, 6))), "E"),
    (lambda: base(n=8, Y=(5, 6, 7)), "F"),
])
def test_planted_axiom_violations(build, axiom):
    p = build()
    assert violation(p)[0] == axiom
    with pytest.raises(InvalidInstance) as err:
        validate(p)
    assert err.value.axiom == axiom


def test_clean_violation_witness():
    p = base()
    ok, w = stage_predicate(p, "clean", 1, 4)
    assert not ok and w["y"] in (5, 6) and w["x_ik"] == 3 and w["x_jk"] == 4
    assert not stage_predicate(p, "spotless", 1, 4)[0]
    assert stage_predicate(p, "orderly", 1, 4)[0] is False  # 3 and 4 are not adjacent


def test_empty_ystar_satisfies_everything():
    p = base(edges=[(0, 1), (1, 2), (3, 0), (3, 1), (4, 1), (4, 2)], n=5, Y=())
    for which in ("clean", "tidy", "orderly", "spotless", "orthogonal", "near-orthogonal"):
        assert stage_predicate(p, which)[0]


def test_normalize_moves_forced_vertices():
    # x3 also sees colour 2 from a new seed vertex: its list becomes {1}
    edges = BASE_EDGES + [(7, 2), (7, 3), (7, 0)]
    p = base(edges=edges, n=8, S=(0, 1, 2, 7), f={**BASE_F, 7: 1})
    validate(p)
    q = normalize(p)
    assert q is not None and 3 in q.X0 and q.f[3] == 2
    assert is_normalized(q)


def test_normalize_detects_empty_list():
    edges = BASE_EDGES + [(7, 2), (7, 3), (8, 7), (8, 3), (8, 0)]
    p = base(edges=edges, n=9, S=(0, 1, 2, 7, 8), f={**BASE_F, 7: 1, 8: 2})
    assert p.mp[3] == 0
    assert normalize(p) is None
    assert brute_force_extension(p) is None


def test_move_to_seed_absorbs_x():
    p = base(edges=BASE_EDGES + [(3, 4)])
    q = move_to_seed(p, [3], [], {3: 1})
    assert q is not None and 3 in q.S and 4 in q.X0 and q.f[4] == 3
    with pytest.raises(ValueError):
        move_to_seed(p, [5], [], {5: 1})


def test_check_extension():
    p = base()
    c = brute_force_extension(p)
    assert check_extension(p, c)
    assert not check_extension(p, {**c, 0: 1})
    assert not check_extension(p, {v: col for v, col in c.items() if v != 6})


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["random", "structured"]))
def test_json_round_trip(seed, family):
    p = gen_excellent(GenParams(n=12, family=family), seed)
    text = json.dumps(to_json(p))
    assert from_json(text) == p
    c = brute_force_extension(p)
    if c is not None:
        assert coloring_from_json(json.dumps(coloring_to_json(c))) == c


@pytest.mark.parametrize("text", ["{", "[]", '{"graph": "p 2 0\\n"}', json.dumps({
    "graph": "p 2 1\ne 0 1\n", "seed": [0], "x0": [], "x": [], "ystar": [1], "f": {"0": 1, "1": 2}})])
def test_bad_json(text):
    with pytest.raises(InvalidInstance):
        validate(from_json(text))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_spotless_implies_clean_and_orderly(seed):
    p = normalize(gen_excellent(GenParams(n=14, ystar_components=3, y_seed_density=0.4), seed))
    if p is None:
        return
    for k, l in ROLE_PAIRS:
        if stage_predicate(p, "spotless", k, l)[0]:
            assert stage_predicate(p, "clean", k, l)[0]
            assert stage_predicate(p, "orderly", k, l)[0]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["random", "structured"]))
def test_generated_instances_are_valid(seed, family):
    p = gen_excellent(GenParams(n=15, family=family), seed)
    assert violation(p) is None
    assert is_pt_free(p.g, 6)
