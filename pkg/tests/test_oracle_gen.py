import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from p6color.errors import OracleLimitExceeded
from p6color.graph_core import Graph, bits, is_pt_free, popcount
from p6color.lists import exact_list_color
from p6color.oracle_gen import (GenParams, GenerationFailed, add_false_twins, brute_force_extension, gen_excellent,
                                gen_p6free)
from p6color.precoloring import StarredPrecoloring, check_extension, to_json, violation
from support import FAMILIES


def via_lists(p):
    """Extension existence through the M_P model and exact_list_color."""
    if any(m == 0 for m in p.mp.values()):
        return False
    return exact_list_color(p.g, dict(p.mp)) is not None


def test_oracle_matches_list_model_1000():
    rng = random.Random(7)
    yes = 0
    for i in range(1000):
        label, prm = FAMILIES[i % len(FAMILIES)]
        p = gen_excellent(prm, rng.randrange(10 ** 9))
        c = brute_force_extension(p)
        assert (c is not None) == via_lists(p), (label, i)
        if c is not None:
            assert check_extension(p, c)
            yes += 1
    assert 200 < yes < 950


def test_oracle_precoloured_only():
    g = Graph(3, [(0, 1), (1, 2)])
    p = StarredPrecoloring(g, [0, 1], [2], [], [], {0: 1, 1: 2, 2: 3})
    assert brute_force_extension(p) == {0: 1, 1: 2, 2: 3}


def test_oracle_k5():
    g = Graph(6, [(u, v) for u in range(1, 6) for v in range(u + 1, 6)] + [(0, 1)])
    p = StarredPrecoloring(g, [0], [], [], [1, 2, 3, 4, 5], {0: 1})
    assert brute_force_extension(p) is None


def test_oracle_limit():
    p = gen_excellent(GenParams(n=14), 0)
    with pytest.raises(OracleLimitExceeded):
        brute_force_extension(p, limit=10)


def test_gen_p6free_200():
    for s in range(200):
        g = gen_p6free(12 + s % 8, 0.2 + (s % 5) * 0.15, s)
        assert is_pt_free(g, 6)


def test_gen_p6free_fallback():
    # dense sparse-ish graphs on 20 vertices rarely pass; the fallback must still be P6-free
    g = gen_p6free(20, 0.15, 3, tries=1)
    assert g.n == 20 and is_pt_free(g, 6)
    with pytest.raises(ValueError):
        gen_p6free(21, 0.5, 0)


def test_minimal_instance():
    p = gen_excellent(GenParams(n=2, seed_size=2, x0_size=0, x_size=0, ystar_components=0), 0)
    assert violation(p) is None
    assert popcount(p.s) == 2 and p.x == 0 and p.y == 0
    assert brute_force_extension(p) == p.f


def test_single_component_has_attachment():
    p = gen_excellent(GenParams(n=12, ystar_components=1), 5)
    assert len(p.ycomps) == 1
    comp = p.ycomps[0]
    assert any(p.g.adj[v] & comp == comp for v in bits(p.g.full & ~p.y))


def test_oversized_request_is_clamped():
    p = gen_excellent(GenParams(n=4, seed_size=4, x_size=3, budget=3), 0)
    assert p.n == 4 and violation(p) is None


def test_generation_failure_names_constraint(monkeypatch):
    import p6color.oracle_gen as og
    monkeypatch.setattr(og, "_try_build", lambda prm, rng: None)
    with pytest.raises(GenerationFailed, match="construction"):
        gen_excellent(GenParams(n=10, budget=3), 0)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from([f for f, _ in FAMILIES]))
def test_reproducible(seed, label):
    prm = dict(FAMILIES)[label]
    a = json.dumps(to_json(gen_excellent(prm, seed)), sort_keys=True)
    b = json.dumps(to_json(gen_excellent(prm, seed)), sort_keys=True)
    assert a == b


@pytest.mark.parametrize("label,prm", FAMILIES)
def test_families_validate(label, prm):
    for s in range(100):
        p = gen_excellent(prm, s)
        assert violation(p) is None and is_pt_free(p.g, 6)
        assert p.n == prm.n


@pytest.mark.parametrize("label,prm", FAMILIES[:1] + FAMILIES[3:4])
def test_false_twins_keep_class_and_answer(label, prm):
    for s in range(15):
        p = gen_excellent(GenParams(**{**prm.__dict__, "n": 12}), s)
        q = add_false_twins(p, 16, s)
        assert q.n == 16 and violation(q) is None and is_pt_free(q.g, 6)
        assert (brute_force_extension(q) is None) == (brute_force_extension(p) is None)
        for v in range(12, 16):
            assert not q.g.adj[v] >> v & 1
            assert any(q.g.adj[v] == q.g.adj[u] for u in range(12))


def test_false_twins_need_a_vertex_to_copy():
    p = gen_excellent(GenParams(n=2, seed_size=2, x0_size=0, x_size=0, ystar_components=0), 0)
    with pytest.raises(GenerationFailed):
        add_false_twins(p, 3)
