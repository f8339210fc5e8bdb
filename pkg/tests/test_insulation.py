import random

import pytest

from p6color.companion import build_companion
from p6color.errors import InvariantViolation
from p6color.graph_core import Graph, bits
from p6color.insulation import (PAIRS_WITH_ONE, ChromaticCutset, insulate_all, is_insulating, merge_colorings,
                                z_partition)
from p6color.lists import ALL, cmask, exact_list_color, is_proper, respects
from p6color.oracle_gen import GenParams, gen_excellent
from p6color.reduction import to_orthogonal_collection
from support import insulated_synthetic, random_list_coloring

P12 = cmask([1, 2])

# d0 - d1 with lists {1,2}; a = 2 sees d0 with list {2,3}; b = 3 sees d0 with list {2,4}
TWO = Graph(4, [(0, 1), (0, 2), (0, 3)])
TWO_L = {0: P12, 1: P12, 2: cmask([2, 3]), 3: cmask([2, 4])}
TWO_CUT = ChromaticCutset(0b0011, 0b0100, 0b1000, P12)


def triples(count, prm):
    for seed in range(count):
        for q, _ in to_orthogonal_collection(gen_excellent(prm, seed)):
            t = build_companion(q)
            if t is not None and all(t.L.values()):
                yield t


ORTH = GenParams(n=18, seed_size=4, x_size=8, ystar_components=3, y_seed_density=0.3,
                 family="structured", orthogonal=True, split_noise=0.6)


def test_hand_cut_is_insulating():
    assert is_insulating(TWO, TWO_L, TWO_CUT) is None


def test_degenerate_cut_accepted():
    g = Graph(3, [(0, 1)])
    L = {v: ALL for v in range(3)}
    assert is_insulating(g, L, ChromaticCutset(0, 0b111, 0, P12)) is None


@pytest.mark.parametrize("change,condition", [
    ({3: cmask([1, 4])}, "cross list"),
    ({2: cmask([3])}, "anchor"),
    ({1: cmask([1])}, "list sizes"),
    ({0: cmask([1, 3])}, "split"),
])
def test_planted_violations(change, condition):
    L = {**TWO_L, **change}
    assert is_insulating(TWO, L, TWO_CUT)[0] == condition


def test_partition_and_chromatic_conditions():
    assert is_insulating(TWO, TWO_L, ChromaticCutset(0b0011, 0b0100, 0, P12))[0] == "partition"
    assert is_insulating(TWO, TWO_L, ChromaticCutset(0b0011, 0, 0b1100, P12))[0] == "far side empty"
    g = Graph(4, [(0, 1), (0, 2), (0, 3), (2, 3)])
    L = {**TWO_L, 3: cmask([3, 4])}
    assert is_insulating(g, L, TWO_CUT) == ("chromatic", (2, 3))


def test_triangle_is_not_bipartite():
    g = Graph(4, [(0, 1), (1, 2), (0, 2), (0, 3)])
    L = {0: P12, 1: P12, 2: P12, 3: cmask([2, 3])}
    assert is_insulating(g, L, ChromaticCutset(0b0111, 0b1000, 0, P12))[0] == "bipartite"


def test_merge_plain_splice():
    c1 = {3: 4}
    c2 = {0: 2, 1: 1, 2: 3}
    out, swaps = merge_colorings(TWO, TWO_L, TWO_CUT, c1, c2)
    assert swaps == 0 and out == {0: 2, 1: 1, 2: 3, 3: 4}


def test_merge_single_flip():
    # b takes 2, the same as d0: flipping {d0, d1} fixes it in one swap
    out, swaps = merge_colorings(TWO, TWO_L, TWO_CUT, {3: 2}, {0: 2, 1: 1, 2: 3})
    assert swaps == 1 and out == {0: 1, 1: 2, 2: 3, 3: 2}


def test_merge_conflict_outside_complex_part():
    g = Graph(2, [(0, 1)])
    L = {0: cmask([3]), 1: cmask([3])}
    cut = ChromaticCutset(0, 0b01, 0b10, P12)
    with pytest.raises(InvariantViolation):
        merge_colorings(g, L, cut, {1: 3}, {0: 3})


def test_synthetic_merges():
    rng = random.Random(17)
    swapped = 0
    for H, L, cut, _, _ in insulated_synthetic(rng, 150, need_complex=True):
        c2 = random_list_coloring(H, L, bits(cut.D | cut.A), rng)
        c1 = random_list_coloring(H, L, bits(cut.B | (cut.D & ~cut.complex_part(H, L))), rng)
        if c1 is None or c2 is None:
            continue
        out, swaps = merge_colorings(H, L, cut, c1, c2)
        assert swaps <= H.n ** 2
        assert set(out) == set(range(H.n)) and is_proper(H, out) and respects(L, out)
        swapped += swaps > 0
    assert swapped > 0


def test_z_partition_respects_classes():
    for t in triples(30, ORTH):
        zs = z_partition(t)
        assert sum(bin(m).count("1") for m in zs.values()) == bin(t.z).count("1")
        for p1, m in zs.items():
            for z in bits(m):
                assert all(t.mclass(x) in (p1, ALL & ~p1) for x in bits(t.H.adj[z]))


@pytest.mark.parametrize("prm", [ORTH, GenParams(n=16, ystar_components=3, y_seed_density=0.3)])
def test_insulated_members(prm):
    checked = 0
    for t in triples(40, prm):
        want = exact_list_color(t.H, t.L) is not None
        got = False
        for L, cuts in insulate_all(t):
            assert all(L[v] & ~t.L[v] == 0 for v in L)
            for p1, cut in cuts.items():
                assert p1 in PAIRS_WITH_ONE
                assert is_insulating(t.H, L, cut) is None
            got = got or exact_list_color(t.H, L) is not None
        assert got == want
        checked += 1
    assert checked >= 20
