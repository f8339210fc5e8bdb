"""Ground truth and instance generation.

``brute_force_extension`` is deliberately written against plain Python sets
and its own search order, sharing no propagation code with the solver, so
the two can check each other.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional

from .errors import OracleLimitExceeded, P6ColorError
from .lists import COLORS
from .graph_core import Graph, bits, find_induced_path, is_pt_free
from .precoloring import StarredPrecoloring, violation

DEFAULT_LIMIT = 24


def brute_force_extension(p: StarredPrecoloring, limit: int = DEFAULT_LIMIT) -> Optional[Dict[int, int]]:
    """A 4-colouring of G extending f, found by plain backtracking, or None."""
    n = p.g.n
    if n > limit:
        raise OracleLimitExceeded(f"oracle refuses n={n} above limit {limit}")
    nbrs = [set() for _ in range(n)]
    for u, v in p.g.edges():
        nbrs[u].add(v)
        nbrs[v].add(u)
    colour: Dict[int, int] = {}
    for v, c in p.f.items():
        colour[v] = c
    for v in colour:
        if any(colour.get(u) == colour[v] for u in nbrs[v]):
            return None
    domain = {}
    for v in range(n):
        if v in colour:
            continue
        domain[v] = {1, 2, 3, 4} - {colour[u] for u in nbrs[v] if u in colour}
    # breadth-first order from the precoloured vertices, ties by degree
    order: List[int] = []
    seen = set(colour)
    frontier = sorted(colour)
    while len(order) < len(domain):
        nxt = []
        for v in frontier:
            for u in sorted(nbrs[v], key=lambda w: (-len(nbrs[w]), w)):
                if u not in seen:
                    seen.add(u)
                    order.append(u)
                    nxt.append(u)
        if not nxt:
            rest = [v for v in range(n) if v not in seen]
            if not rest:
                break
            start = max(rest, key=lambda w: (len(nbrs[w]), -w))
            seen.add(start)
            order.append(start)
            nxt = [start]
        frontier = nxt

    def go(idx: int) -> bool:
        if idx == len(order):
            return True
        v = order[idx]
        for c in sorted(domain[v]):
            touched = []
            ok = True
            for u in nbrs[v]:
                if u in domain and u not in colour and c in domain[u]:
                    domain[u].discard(c)
                    touched.append(u)
                    if not domain[u]:
                        ok = False
            if ok:
                colour[v] = c
                if go(idx + 1):
                    return True
                del colour[v]
            for u in touched:
                domain[u].add(c)
        return False

    if any(not d for d in domain.values()):
        return None
    return dict(colour) if go(0) else None


# ---------------------------------------------------------------------------
# generators


def _complete_multipartite(n: int, rng: random.Random) -> Graph:
    parts = [rng.randrange(rng.randint(1, max(1, min(n, 5)))) for _ in range(n)]
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if parts[u] != parts[v]])


def _split_graph(n: int, rng: random.Random) -> Graph:
    # a clique K and an independent set I; induced paths have at most 4 vertices
    clique = [v for v in range(n) if rng.random() < 0.5]
    cs = set(clique)
    edges = [(u, v) for u in clique for v in clique if u < v]
    for v in range(n):
        if v in cs:
            continue
        for u in clique:
            if rng.random() < 0.5:
                edges.append((min(u, v), max(u, v)))
    return Graph(n, edges)


def gen_p6free(n: int, edge_prob: float, rng_seed: int, tries: int = 200) -> Graph:
    """A P6-free graph; G(n, p) by rejection, else a structured fallback."""
    if n > 20:
        raise ValueError("rejection sampling supports n <= 20")
    rng = random.Random(rng_seed)
    for _ in range(tries):
        g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < edge_prob])
        if is_pt_free(g, 6):
            return g
    g = _complete_multipartite(n, rng) if rng.random() < 0.5 else _split_graph(n, rng)
    assert is_pt_free(g, 6)
    return g


@dataclass
class GenParams:
    """Bounds for ``gen_excellent``.

    Edges respect a hidden colouring except for ``noise`` extra edges that
    ignore it; with no noise the instance is extendable.  ``noise=None``
    draws it at random (zero half of the time).

    ``family="structured"`` plants every colour in the seed, gives each X
    vertex a list from one of the three complementary pairs and colours
    each Y* component from one colour of each pair, so components tend to
    have attachments on both sides.  ``orthogonal=True`` only attaches an
    X vertex to a component coloured from the same split.
    """

    n: int = 14
    seed_size: int = 4
    x0_size: int = 1
    x_size: int = 5
    ystar_components: int = 2
    noise: Optional[int] = None
    density: float = 0.45
    y_seed_density: Optional[float] = None
    family: str = "random"
    split_noise: float = 0.25
    orthogonal: bool = False
    budget: int = 400


class GenerationFailed(P6ColorError):
    pass


def _try_build(prm: GenParams, rng: random.Random):
    n = prm.n
    s_n = max(2, min(prm.seed_size, n))
    x0_n = max(0, min(prm.x0_size, n - s_n))
    x_n = max(0, min(prm.x_size, n - s_n - x0_n))
    perm = list(range(n))
    rng.shuffle(perm)
    S = perm[:s_n]
    X0 = perm[s_n:s_n + x0_n]
    X = perm[s_n + x0_n:s_n + x0_n + x_n]
    Y = perm[s_n + x0_n + x_n:]
    hidden = {v: rng.randint(1, 4) for v in range(n)}
    if len({hidden[v] for v in S}) < 2:
        hidden[S[1]] = hidden[S[0]] % 4 + 1
    edges = set()

    def ok(u, v):
        return hidden[u] != hidden[v]

    def add(u, v):
        edges.add((min(u, v), max(u, v)))

    # seed: a random tree between differently coloured vertices, then chords
    placed = [S[0]]
    pending = S[1:]
    while pending:
        progress = False
        for v in list(pending):
            cands = [u for u in placed if ok(u, v)]
            if cands:
                add(v, rng.choice(cands))
                placed.append(v)
                pending.remove(v)
                progress = True
        if not progress:
            hidden[pending[0]] = hidden[placed[0]] % 4 + 1
    for a in S:
        for b in S:
            if a < b and ok(a, b) and rng.random() < prm.density:
                add(a, b)
    seed_colours = sorted({hidden[s] for s in S})
    # X vertices: mostly exactly two seed colours, so lists have size two
    for x in X:
        avail = [c for c in seed_colours if c != hidden[x]]
        if len(avail) < 2:
            return None
        want = 3 if len(avail) >= 3 and rng.random() < 0.15 else 2
        cols = rng.sample(avail, want)
        nb = []
        for c in cols:
            pool = [s for s in S if hidden[s] == c]
            nb += [s for s in pool if rng.random() < 0.6] or [rng.choice(pool)]
        if len(nb) == len(S):
            return None
        for s in nb:
            add(x, s)
    y_dens = prm.density / 3 if prm.y_seed_density is None else prm.y_seed_density
    for v in X0 + Y:
        for s in S:
            if ok(v, s) and rng.random() < (prm.density if v in X0 else y_dens):
                add(v, s)
    # Y* components: a random tree plus chords
    k = max(1, min(prm.ystar_components, len(Y))) if Y else 0
    comps: List[List[int]] = [[] for _ in range(k)]
    for i, y in enumerate(Y):
        comps[i if i < k else rng.randrange(k)].append(y)
    for comp in comps:
        for idx in range(1, len(comp)):
            cands = [u for u in comp[:idx] if ok(u, comp[idx])]
            if not cands:
                return None
            add(comp[idx], rng.choice(cands))
        for a in comp:
            for b in comp:
                if a < b and ok(a, b) and rng.random() < prm.density:
                    add(a, b)
    for comp in comps:
        for x in X:
            if all(ok(x, y) for y in comp) and rng.random() < 0.5:
                for y in comp:
                    add(x, y)
        for v in S + X0:
            for y in comp:
                if ok(v, y) and rng.random() < prm.density / 2:
                    add(v, y)
        if not any(all((min(v, y), max(v, y)) in edges for y in comp) for v in S + X0 + X):
            cands = [v for v in S + X0 + X if all(ok(v, y) for y in comp)]
            if not cands:
                return None
            v = rng.choice(cands)
            for y in comp:
                add(v, y)
    for a in X + X0:
        for b in X + X0:
            if a < b and ok(a, b) and rng.random() < prm.density:
                add(a, b)
    for a in X0:
        for y in Y:
            if ok(a, y) and rng.random() < prm.density / 2:
                add(a, y)
    return _finish_build(prm, rng, n, S, X0, X, Y, hidden, edges)


def _finish_build(prm: GenParams, rng: random.Random, n, S, X0, X, Y, hidden, edges):
    # noise: edges inside a hidden colour class, kept away from X-Y* pairs
    noise = prm.noise if prm.noise is not None else (0 if rng.random() < 0.5 else rng.randint(1, 3))
    coloured = set(S + X0)
    xs, ys = set(X), set(Y)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)
             if (u, v) not in edges and hidden[u] == hidden[v]
             and not (u in coloured and v in coloured)
             and not ((u in xs and v in ys) or (u in ys and v in xs))]
    for u, v in rng.sample(pairs, min(noise, len(pairs))):
        edges.add((u, v))
    g = Graph(n, sorted(edges))
    f = {v: hidden[v] for v in S + X0}
    return StarredPrecoloring(g, S, X0, X, Y, f), edges, hidden


_SPLITS = [((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3))]


def _try_build_structured(prm: GenParams, rng: random.Random):
    n = prm.n
    s_n = max(4, min(prm.seed_size, n))
    x0_n = max(0, min(prm.x0_size, n - s_n))
    x_n = max(0, min(prm.x_size, n - s_n - x0_n))
    perm = list(range(n))
    rng.shuffle(perm)
    S = perm[:s_n]
    X0 = perm[s_n:s_n + x0_n]
    X = perm[s_n + x0_n:s_n + x0_n + x_n]
    Y = perm[s_n + x0_n + x_n:]
    hidden = {v: rng.randint(1, 4) for v in range(n)}
    for idx, c in enumerate(rng.sample([1, 2, 3, 4], 4)):
        hidden[S[idx]] = c
    edges = set()

    def ok(u, v):
        return hidden[u] != hidden[v]

    def add(u, v):
        edges.add((min(u, v), max(u, v)))

    for idx in range(1, s_n):
        cands = [u for u in S[:idx] if ok(u, S[idx])]
        if not cands:
            hidden[S[idx]] = hidden[S[0]] % 4 + 1
            cands = [S[0]]
        add(S[idx], rng.choice(cands))
    for a in S:
        for b in S:
            if a < b and ok(a, b) and rng.random() < prm.density / 2:
                add(a, b)
    # X: list = one half of a split, so seed neighbours carry the other half
    split = rng.choice(_SPLITS)
    halves = {}
    for x in X:
        if rng.random() < prm.split_noise:
            split_x = rng.choice(_SPLITS)
        else:
            split_x = split
        half = list(rng.choice(split_x))
        halves[x] = half
        hidden[x] = rng.choice(half)
        for c in COLORS:
            if c in half:
                continue
            pool = [s for s in S if hidden[s] == c]
            for s in [s for s in pool if rng.random() < 0.5] or [rng.choice(pool)]:
                add(x, s)
    y_dens = prm.density / 2 if prm.y_seed_density is None else prm.y_seed_density
    for v in X0:
        for s in S:
            if ok(v, s) and rng.random() < prm.density:
                add(v, s)
    k = max(1, min(prm.ystar_components, len(Y))) if Y else 0
    comps: List[List[int]] = [[] for _ in range(k)]
    for i, y in enumerate(Y):
        comps[i if i < k else rng.randrange(k)].append(y)
    for comp in comps:
        a, b = rng.choice(_SPLITS) if rng.random() < prm.split_noise else split
        comp_split = {a, b}
        palette = [rng.choice(a), rng.choice(b)]
        for idx, y in enumerate(comp):
            hidden[y] = palette[idx % 2] if rng.random() < 0.85 else rng.randint(1, 4)
        for idx in range(1, len(comp)):
            cands = [u for u in comp[:idx] if ok(u, comp[idx])]
            if not cands:
                return None
            add(comp[idx], rng.choice(cands))
        for y in comp:
            for s in S:
                if ok(y, s) and rng.random() < y_dens:
                    add(y, s)
        for x in X:
            if prm.orthogonal and tuple(sorted(halves[x])) not in comp_split:
                continue
            if all(ok(x, y) for y in comp) and rng.random() < 0.6:
                for y in comp:
                    add(x, y)
        for v in X0:
            for y in comp:
                if ok(v, y) and rng.random() < prm.density / 2:
                    add(v, y)
        if not any(all((min(v, y), max(v, y)) in edges for y in comp) for v in S + X0 + X):
            cands = [v for v in S + X0 + X if all(ok(v, y) for y in comp)]
            if not cands:
                return None
            v = rng.choice(cands)
            for y in comp:
                add(v, y)
    for a in X + X0:
        for b in X + X0:
            if a < b and ok(a, b) and rng.random() < prm.density / 2:
                # an X0 neighbour coloured from an X list would force that list
                if a in halves and b not in halves and hidden[b] in halves[a]:
                    continue
                if b in halves and a not in halves and hidden[a] in halves[b]:
                    continue
                add(a, b)
    return _finish_build(prm, rng, n, S, X0, X, Y, hidden, edges)


def _repair_p6(p: StarredPrecoloring, edges, hidden, rng: random.Random, rounds: int = 60):
    """Add chords to induced P6's while keeping every axiom.

    A chord may join two path vertices at distance two or more when their
    hidden colours differ; an X vertex that gains a Y* neighbour gains its
    whole component.
    """
    comps = {}
    for comp in p.ycomps:
        for v in bits(comp):
            comps[v] = comp
    xs = set(p.X)
    for _ in range(rounds):
        path = find_induced_path(p.g, 6)
        if path is None:
            return p
        pairs = [(path[a], path[b]) for a in range(6) for b in range(a + 2, 6)]
        rng.shuffle(pairs)
        added = False
        for u, v in pairs:
            if u in comps and v in comps and comps[u] != comps[v]:
                continue
            new = {(min(u, v), max(u, v))}
            for a, b in ((u, v), (v, u)):
                if a in xs and b in comps:
                    new |= {(min(a, y), max(a, y)) for y in bits(comps[b])}
            if any(hidden[a] == hidden[b] for a, b in new):
                continue
            cand = edges | new
            q = StarredPrecoloring(Graph(p.n, sorted(cand)), p.s, p.x0, p.x, p.y, p.f)
            if violation(q) is not None:
                continue
            # prefer chords that keep X lists at two colours
            if any(bin(q.mp[x]).count("1") < 2 <= bin(p.mp[x]).count("1") for x in xs) and rng.random() < 0.9:
                continue
            edges, p, added = cand, q, True
            break
        if not added:
            return None
    return p if find_induced_path(p.g, 6) is None else None


def gen_excellent(params: Optional[GenParams] = None, rng_seed: int = 0) -> StarredPrecoloring:
    """A random precolouring meeting every axiom on a P6-free graph."""
    prm = params or GenParams()
    rng = random.Random(rng_seed)
    last = "no attempt"
    for _ in range(prm.budget):
        built = (_try_build_structured if prm.family == "structured" else _try_build)(prm, rng)
        if built is None:
            last = "construction"
            continue
        p, edges, hidden = built
        bad = violation(p)
        if bad is not None:
            last = f"axiom {bad[0]}"
            continue
        if not is_pt_free(p.g, 6):
            p = _repair_p6(p, edges, hidden, rng)
            if p is None:
                last = "P6-freeness"
                continue
        return p
    raise GenerationFailed(f"generation budget exhausted; last failing constraint: {last}")


def add_false_twins(p: StarredPrecoloring, n: int, rng_seed: int = 0) -> StarredPrecoloring:
    """Grow p to n vertices by copying X and Y* vertices as false twins.

    A copy gets the neighbourhood of its original and no edge to it, and
    joins the original's part.  An induced path meets a class of false
    twins at most once, so P6-freeness survives; the copy can reuse the
    original's colour, so extendability is unchanged.
    """
    rng = random.Random(rng_seed)
    pool = list(bits(p.x | p.y))
    if not pool and n > p.n:
        raise GenerationFailed("no X or Y* vertex to copy")
    adj = list(p.g.adj)
    x, y = p.x, p.y
    while len(adj) < n:
        v = rng.choice(pool)
        new = len(adj)
        adj.append(adj[v])
        for u in bits(adj[v]):
            adj[u] |= 1 << new
        if x >> v & 1:
            x |= 1 << new
        else:
            y |= 1 << new
    edges = [(u, w) for u in range(len(adj)) for w in bits(adj[u]) if u < w]
    q = StarredPrecoloring(Graph(len(adj), edges), p.s, p.x0, x, y, p.f)
    bad = violation(q)
    if bad is not None:
        raise GenerationFailed(f"twin copy broke axiom {bad[0]}")
    return q
