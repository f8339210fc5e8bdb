"""Instance families and small independent helpers shared by the tests."""

import itertools
import random

from p6color.graph_core import Graph, bits, components_mask, is_pt_free
from p6color.insulation import ChromaticCutset, is_insulating
from p6color.lists import ALL, colors
from p6color.oracle_gen import GenParams, gen_excellent

# (label, params) pairs; seeds are taken from range(...) per family.
FAMILIES = [
    ("random-s4", GenParams(n=16, seed_size=4, x_size=5, ystar_components=2, y_seed_density=0.3)),
    ("random-s6", GenParams(n=20, seed_size=6, x_size=5, ystar_components=3, y_seed_density=0.3)),
    ("random-dense", GenParams(n=20, seed_size=5, x_size=7, ystar_components=4, y_seed_density=0.5)),
    ("structured", GenParams(n=18, seed_size=4, x_size=8, ystar_components=3, y_seed_density=0.3,
                             family="structured", split_noise=0.3)),
    ("structured-orth", GenParams(n=20, seed_size=4, x_size=9, ystar_components=3, y_seed_density=0.4,
                                  family="structured", orthogonal=True, split_noise=0.6)),
]


def family_instances(per_family, families=FAMILIES, n_max=None):
    for label, prm in families:
        for s in range(per_family):
            if n_max is not None and prm.n > n_max:
                continue
            yield label, s, gen_excellent(prm, s)


def stage_params():
    """Families where the stage predicates often fail, so the stages branch."""
    return [
        GenParams(n=16, seed_size=4, x_size=6, ystar_components=2, y_seed_density=0.2,
                  family="structured", split_noise=1.0),
        GenParams(n=16, seed_size=3, x_size=6, ystar_components=2, y_seed_density=0.1, density=0.6),
        GenParams(n=16, seed_size=3, x_size=7, ystar_components=1, y_seed_density=0.1, density=0.6),
    ]


def naive_list_colorings(H, L, domain):
    """Every L-colouring of H|domain by plain enumeration (small domains only)."""
    dom = sorted(domain)
    for combo in itertools.product(*[colors(L[v]) for v in dom]):
        c = dict(zip(dom, combo))
        if all(c[u] != c[v] for u in dom for v in bits(H.adj[u]) if v in c):
            yield c


def naive_colorable(H, L, domain):
    return next(naive_list_colorings(H, L, domain), None) is not None


def random_list_coloring(H, L, domain, rng):
    """A random L-colouring of H|domain, by shuffled backtracking."""
    order = sorted(domain)
    rng.shuffle(order)
    c = {}

    def go(i):
        if i == len(order):
            return True
        v = order[i]
        cs = colors(L[v])
        rng.shuffle(cs)
        for col in cs:
            if all(c.get(u) != col for u in bits(H.adj[v])):
                c[v] = col
                if go(i + 1):
                    return True
                del c[v]
        return False

    return c if go(0) else None


def synthetic_cut(rng, with_b=True, p1=None):
    """A random graph with a candidate cutset (D, A, B) for split p1.

    D is split into a P1 class and a P2 class whose lists sit inside the
    pair; edges inside D stay within one class, A is stable unless B is
    used, and A-B edges only join disjoint lists.  The caller filters with
    is_insulating and P6-freeness.
    """
    p1 = p1 or rng.choice([0b0011, 0b0101, 0b1001])
    p2 = ALL & ~p1
    nd, na = rng.randint(2, 7), rng.randint(1, 5)
    nb = rng.randint(1, 5) if with_b else 0
    n = nd + na + nb
    D, A, B = range(nd), range(nd, nd + na), range(nd + na, n)
    side = {d: rng.choice([p1, p2]) for d in D}
    L = {d: side[d] for d in D}
    for v in list(A) + list(B):
        L[v] = rng.randint(1, 15)
    edges = set()
    for i in D:
        for j in D:
            if i < j and side[i] == side[j] and rng.random() < 0.45:
                edges.add((i, j))
    for d in D:
        for v in list(A) + list(B):
            if rng.random() < 0.4:
                edges.add((d, v))
    for a in A:
        for b in B:
            if not L[a] & L[b] and rng.random() < 0.3:
                edges.add((a, b))
    if with_b:
        for x in list(A) + list(B):
            for y in list(A) + list(B):
                if x < y and (x in A) == (y in A) and rng.random() < 0.3:
                    edges.add((x, y))
    H = Graph(n, sorted(edges))
    if rng.random() < 0.3:
        for comp in components_mask(H, sum(1 << d for d in D)):
            if comp & (comp - 1) == 0 and rng.random() < 0.5:
                d = comp.bit_length() - 1
                L[d] = 1 << (rng.choice(colors(L[d])) - 1)
    cut = ChromaticCutset(sum(1 << d for d in D), sum(1 << a for a in A), sum(1 << b for b in B), p1)
    x12 = sum(1 << d for d in D if side[d] == p1)
    return H, L, cut, x12, cut.D & ~x12


def has_excluded_path(H, L, cut, x12, x34):
    """A path t1-t2-t3-t4-t5 with t1, t3, t5 on the far side, t2, t4 in one
    class of D, L(t1) meeting that pair in one colour i and the other colour
    j in both L(t3) and L(t5).

    In a real companion triple this cannot happen: t1 has a neighbour
    coloured j in the underlying graph, which then closes a P6 through the
    components of t1, t3 and t5.  Synthetic instances lack that graph, so
    they are filtered instead.
    """
    for cls, pq in ((cut.D & x12, cut.p1), (cut.D & x34, cut.p2)):
        for t1 in bits(cut.A):
            own = L[t1] & pq
            if bin(own).count("1") != 1:
                continue
            j = pq & ~own
            for t2 in bits(H.adj[t1] & cls):
                for t3 in bits(H.adj[t2] & cut.A & ~H.adj[t1]):
                    if t3 == t1 or not L[t3] & j:
                        continue
                    for t4 in bits(H.adj[t3] & cls & ~H.adj[t1] & ~H.adj[t2]):
                        for t5 in bits(H.adj[t4] & cut.A & ~H.adj[t1] & ~H.adj[t2] & ~H.adj[t3]):
                            if t5 not in (t1, t3) and L[t5] & j:
                                return True
    return False


def insulated_synthetic(rng, count, with_b=True, need_complex=False):
    """``count`` synthetic P6-free instances whose cut passes is_insulating."""
    out = []
    while len(out) < count:
        H, L, cut, x12, x34 = synthetic_cut(rng, with_b)
        if is_insulating(H, L, cut) is not None or not is_pt_free(H, 6):
            continue
        if has_excluded_path(H, L, cut, x12, x34):
            continue
        if need_complex and not cut.complex_part(H, L):
            continue
        out.append((H, L, cut, x12, x34))
    return out


def seeded(seed):
    return random.Random(seed)


STAGE_KEEPS = {
    "clean": ("clean",),
    "tidy": ("clean", "tidy"),
    "orderly": ("clean", "tidy", "orderly"),
    "spotless": ("tidy", "spotless"),
}


def run_stages(p):
    """Apply the four stages pair by pair, checking the counting bounds.

    Returns ({stage: members}, [bound failures]).  Clean and tidy steps may
    add at most 2^|S| seed vertices; orderly and spotless keep the seed; a
    single step yields at most |V|^(2^(|S|+1)) members.
    """
    from p6color.graph_core import popcount
    from p6color.precoloring import ROLE_PAIRS, normalize
    from p6color.reduction import make_clean_step, make_orderly_step, make_spotless_step, make_tidy_step

    steps = [("clean", make_clean_step), ("tidy", make_tidy_step),
             ("orderly", make_orderly_step), ("spotless", make_spotless_step)]
    q0 = normalize(p)
    cur = [] if q0 is None else [q0]
    out, failures = {}, []
    for name, step in steps:
        for k, l in ROLE_PAIRS:
            nxt = []
            for q in cur:
                members = list(step(q, k, l))
                s = popcount(q.s)
                if len(members) > q.n ** (2 ** (s + 1)):
                    failures.append((name, k, l, "collection size"))
                for m in members:
                    grew = popcount(m.s) - s
                    if grew > (2 ** s if name in ("clean", "tidy") else 0):
                        failures.append((name, k, l, "seed growth", grew))
                nxt.extend(members)
            cur = list(dict.fromkeys(nxt))
        out[name] = cur
    return out, failures
