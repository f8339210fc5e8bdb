"""Starred precolorings: axioms, derived lists, seed moves and stage predicates.

A precoloring is the tuple (G, S, X0, X, Y*, f).  S is the seed, f colours
S and X0, every X vertex sees at least two seed colours, and Y* is split into
components that X vertices never see partially.
"""

from __future__ import annotations

import json
from functools import cached_property
from itertools import permutations
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import InvalidInstance
from .graph_core import Graph, bits, components_mask, lowest, mask_of, parse_edge_list, format_edge_list
from .lists import ALL, COLORS, cbit, cmask, colors, is_proper, size, update_exhaustively

Coloring = Dict[int, int]

# the twelve ordered (k, l) pairs; i < j are the two remaining colours
ROLE_PAIRS = [(k, l) for k, l in permutations(COLORS, 2)]


def roles(k: int, l: int) -> Tuple[int, int, int, int]:
    i, j = [c for c in COLORS if c not in (k, l)]
    return k, l, i, j


class StarredPrecoloring:
    """Immutable six-tuple.  Vertex sets are stored as bitmasks."""

    def __init__(self, g: Graph, S, X0, X, Ystar, f: Dict[int, int]):
        self.g = g
        self.s = S if isinstance(S, int) else mask_of(S)
        self.x0 = X0 if isinstance(X0, int) else mask_of(X0)
        self.x = X if isinstance(X, int) else mask_of(X)
        self.y = Ystar if isinstance(Ystar, int) else mask_of(Ystar)
        self.f = dict(f)

    # plain views -----------------------------------------------------------
    @property
    def S(self) -> List[int]:
        return list(bits(self.s))

    @property
    def X0(self) -> List[int]:
        return list(bits(self.x0))

    @property
    def X(self) -> List[int]:
        return list(bits(self.x))

    @property
    def Ystar(self) -> List[int]:
        return list(bits(self.y))

    @property
    def n(self) -> int:
        return self.g.n

    @cached_property
    def key(self):
        return (self.g.adj, self.s, self.x0, self.x, self.y, tuple(sorted(self.f.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, StarredPrecoloring) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return (f"StarredPrecoloring(n={self.n}, |S|={len(self.S)}, |X0|={len(self.X0)}, "
                f"|X|={len(self.X)}, |Y*|={len(self.Ystar)})")

    # derived structure -----------------------------------------------------
    def type_of(self, v: int) -> int:
        """N(v) & S as a mask."""
        return self.g.adj[v] & self.s

    def type_list(self, t: int) -> int:
        """L_P(T): colours not used by f on T."""
        used = 0
        for v in bits(t):
            used |= cbit(self.f[v])
        return ALL & ~used

    @cached_property
    def lp(self) -> Dict[int, int]:
        out = {}
        for v in range(self.n):
            if (self.s | self.x0) >> v & 1:
                out[v] = cbit(self.f[v])
            else:
                out[v] = self.type_list(self.type_of(v))
        return out

    @cached_property
    def mp(self) -> Dict[int, int]:
        lp = self.lp
        inner = {v: lp[v] for v in bits(self.x | self.x0)}
        m1 = update_exhaustively(self.g, inner)
        out = dict(lp)
        out.update(m1)
        return out

    @cached_property
    def ycomps(self) -> List[int]:
        return components_mask(self.g, self.y)

    @cached_property
    def comp_index(self) -> Dict[int, int]:
        out = {}
        for i, c in enumerate(self.ycomps):
            for v in bits(c):
                out[v] = i
        return out

    def comp_of(self, y: int) -> int:
        return self.ycomps[self.comp_index[y]]

    @cached_property
    def x_by_list(self) -> Dict[int, int]:
        """Mask of X vertices for each M_P list (the X_ij classes)."""
        out: Dict[int, int] = {}
        mp = self.mp
        for v in bits(self.x):
            out[mp[v]] = out.get(mp[v], 0) | (1 << v)
        return out

    def xij_mask(self, i: int, j: int) -> int:
        return self.x_by_list.get(cbit(i) | cbit(j), 0)

    @cached_property
    def x_types(self) -> Dict[int, int]:
        """Mask of X vertices of each type T (keyed by the mask of T)."""
        out: Dict[int, int] = {}
        for v in bits(self.x):
            t = self.type_of(v)
            out[t] = out.get(t, 0) | (1 << v)
        return out

    def attach_x(self, comp: int) -> int:
        """X vertices complete to the vertex set ``comp``."""
        out = self.x
        for v in bits(comp):
            out &= self.g.adj[v]
        return out

    def with_sets(self, S: int, X0: int, X: int, Y: int, f: Dict[int, int]) -> "StarredPrecoloring":
        return StarredPrecoloring(self.g, S, X0, X, Y, f)


# ---------------------------------------------------------------------------
# axioms


def violation(p: StarredPrecoloring) -> Optional[Tuple[str, str, object]]:
    """First failed axiom as (axiom, message, witness), or None."""
    g = p.g
    full = g.full
    sets = [p.s, p.x0, p.x, p.y]
    covered = 0
    for m in sets:
        if m & covered:
            return ("B", "the four vertex sets overlap", list(bits(m & covered)))
        covered |= m
    if covered != full:
        return ("B", "the four vertex sets do not cover V(G)", list(bits(full & ~covered)))
    coloured = p.s | p.x0
    if set(p.f) != set(bits(coloured)):
        extra = sorted(set(p.f) ^ set(bits(coloured)))
        return ("A", "f must be defined exactly on S and X0", extra)
    for v, c in p.f.items():
        if c not in COLORS:
            return ("A", f"colour {c} outside 1..4", v)
    for v in bits(coloured):
        for u in bits(g.adj[v] & coloured):
            if p.f[u] == p.f[v]:
                return ("A", "f is not proper", (min(u, v), max(u, v)))
    if p.s == 0:
        if full:
            return ("C", "empty seed is complete to every vertex", lowest(full))
    else:
        comps = components_mask(g, p.s)
        if len(comps) > 1:
            return ("C", "G|S is not connected", list(bits(comps[1])))
        for v in bits(full & ~p.s):
            if g.adj[v] & p.s == p.s:
                return ("C", "a vertex outside S is complete to S", v)
    for v in bits(p.x):
        seen = 0
        for u in bits(g.adj[v] & p.s):
            seen |= cbit(p.f[u])
        if size(seen) < 2:
            return ("D", "an X vertex sees fewer than two seed colours", v)
    for comp in components_mask(g, p.y):
        for v in bits(p.x):
            hit = g.adj[v] & comp
            if hit and hit != comp:
                return ("E", "an X vertex is mixed on a Y* component", (v, list(bits(comp))))
    for comp in components_mask(g, p.y):
        att = full & ~p.y
        for v in bits(comp):
            att &= g.adj[v]
        if not att:
            return ("F", "a Y* component has no attachment in S, X0 or X", list(bits(comp)))
    return None


def validate(p: StarredPrecoloring) -> None:
    bad = violation(p)
    if bad is not None:
        axiom, msg, witness = bad
        raise InvalidInstance(axiom, msg, witness)


def is_valid(p: StarredPrecoloring) -> bool:
    return violation(p) is None


def lp(p: StarredPrecoloring) -> Dict[int, int]:
    return dict(p.lp)


def mp(p: StarredPrecoloring) -> Dict[int, int]:
    return dict(p.mp)


def x0_of(p: StarredPrecoloring) -> List[int]:
    """X^0(P): vertices whose M_P list is a single colour."""
    return [v for v, m in p.mp.items() if size(m) == 1]


def xij(p: StarredPrecoloring, i: int, j: int) -> List[int]:
    return list(bits(p.xij_mask(i, j)))


def has_empty_list(p: StarredPrecoloring) -> bool:
    return any(m == 0 for m in p.mp.values())


def normalize(p: StarredPrecoloring) -> Optional[StarredPrecoloring]:
    """Move every X vertex with a forced colour into X0.

    Returns None when some M_P list is empty: then P has no extension.
    """
    mp_ = p.mp
    if any(m == 0 for m in mp_.values()):
        return None
    forced = 0
    f = dict(p.f)
    for v in bits(p.x):
        if size(mp_[v]) == 1:
            forced |= 1 << v
            f[v] = mp_[v].bit_length()
    if not forced:
        return p
    out = p.with_sets(p.s, p.x0 | forced, p.x & ~forced, p.y, f)
    if not is_proper(p.g, {v: f[v] for v in bits(out.s | out.x0)}):
        return None
    return out


def is_normalized(p: StarredPrecoloring) -> bool:
    return all(size(p.mp[v]) == 2 for v in bits(p.x)) and not has_empty_list(p)


def move_to_seed(p: StarredPrecoloring, Sdd: Iterable[int], X0dd: Iterable[int],
                 fprime: Dict[int, int]) -> Optional[StarredPrecoloring]:
    """Move Sdd (inside X) to the seed and X0dd (inside X or Y*) to X0.

    X vertices that see a new seed vertex coloured from their M_P list are
    absorbed into X0 with the colour that remains.  Returns None if the
    resulting precolouring is not proper.
    """
    sdd = Sdd if isinstance(Sdd, int) else mask_of(Sdd)
    xdd = X0dd if isinstance(X0dd, int) else mask_of(X0dd)
    if sdd & ~p.x:
        raise ValueError("vertices moved to the seed must lie in X")
    if xdd & ~(p.x | p.y):
        raise ValueError("vertices moved to X0 must lie in X or Y*")
    if sdd & xdd:
        raise ValueError("a vertex cannot move to both S and X0")
    g = p.g
    mp_ = p.mp
    f = dict(p.f)
    for v in bits(sdd | xdd):
        f[v] = fprime[v]
    absorbed = 0
    for x in bits(p.x & ~xdd & ~sdd):
        lost = 0
        for z in bits(g.adj[x] & sdd):
            lost |= cbit(f[z])
        if lost & mp_[x]:
            rest = mp_[x] & ~lost
            if size(rest) != 1:
                return None
            absorbed |= 1 << x
            f[x] = rest.bit_length()
    S = p.s | sdd
    X0 = p.x0 | absorbed | xdd
    X = p.x & ~(absorbed | sdd | xdd)
    Y = p.y & ~xdd
    coloured = S | X0
    for v in bits(coloured):
        for u in bits(g.adj[v] & coloured):
            if f[u] == f[v]:
                return None
    return p.with_sets(S, X0, X, Y, f)


def check_extension(p: StarredPrecoloring, c: Dict[int, int]) -> bool:
    """True iff c is a proper 4-colouring of G agreeing with f."""
    if set(c) != set(range(p.n)):
        return False
    if any(col not in COLORS for col in c.values()):
        return False
    if any(c[v] != col for v, col in p.f.items()):
        return False
    return is_proper(p.g, c)


# ---------------------------------------------------------------------------
# stage predicates; each returns None when the property holds, else a witness


def _nbr_in(p: StarredPrecoloring, y: int, mask: int) -> int:
    return p.g.adj[y] & mask


def clean_witness(p: StarredPrecoloring, k: int, l: int):
    k, l, i, j = roles(k, l)
    mp_ = p.mp
    xik, xjk = p.xij_mask(i, k), p.xij_mask(j, k)
    ij = cbit(i) | cbit(j)
    for comp in p.ycomps:
        ks = [u for u in bits(comp) if mp_[u] & cbit(k)]
        if not ks:
            continue
        for y in bits(comp):
            if mp_[y] & ij != ij:
                continue
            a, b = _nbr_in(p, y, xik), _nbr_in(p, y, xjk)
            if a and b:
                return {"y": y, "u": ks[0], "x_ik": lowest(a), "x_jk": lowest(b)}
    return None


def _l_path(p: StarredPrecoloring, comp: int, l: int, src: int, dst_mask: int) -> Optional[List[int]]:
    """Shortest path from src to dst_mask inside comp using l-listed vertices."""
    mp_ = p.mp
    allowed = mask_of(u for u in bits(comp) if mp_[u] & cbit(l))
    if not allowed >> src & 1:
        return None
    prev = {src: None}
    frontier = [src]
    while frontier:
        nxt = []
        for v in frontier:
            if dst_mask >> v & 1:
                path = [v]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                return path[::-1]
            for w in bits(p.g.adj[v] & allowed):
                if w not in prev:
                    prev[w] = v
                    nxt.append(w)
        frontier = nxt
    return None


def tidy_witness(p: StarredPrecoloring, k: int, l: int):
    k, l, i, j = roles(k, l)
    mp_ = p.mp
    xki, xkj = p.xij_mask(k, i), p.xij_mask(k, j)
    for comp in p.ycomps:
        ks = [u for u in bits(comp) if mp_[u] & cbit(k)]
        if not ks:
            continue
        att = p.attach_x(comp)
        if not (att & xki and att & xkj):
            continue
        for a, b in ((i, j), (j, i)):
            jmask = mask_of(u for u in bits(comp) if mp_[u] & cbit(b))
            for yi in bits(comp):
                if not mp_[yi] & cbit(a):
                    continue
                path = _l_path(p, comp, l, yi, jmask)
                if path is not None:
                    return {"y_i": yi, "y_j": path[-1], "path": path, "u": ks[0],
                            "x_ki": lowest(att & xki), "x_kj": lowest(att & xkj)}
    return None


def orderly_witness(p: StarredPrecoloring, k: int, l: int):
    k, l, i, j = roles(k, l)
    mp_ = p.mp
    xik, xjk = p.xij_mask(i, k), p.xij_mask(j, k)
    ij = cbit(i) | cbit(j)
    for y in bits(p.y):
        if mp_[y] & ij != ij:
            continue
        a_mask, b_mask = _nbr_in(p, y, xik), _nbr_in(p, y, xjk)
        for a in bits(a_mask):
            missing = b_mask & ~p.g.adj[a]
            if missing:
                return {"y": y, "x_ik": a, "x_jk": lowest(missing)}
    return None


def spotless_witness(p: StarredPrecoloring, k: int, l: int):
    k, l, i, j = roles(k, l)
    mp_ = p.mp
    xik, xjk = p.xij_mask(i, k), p.xij_mask(j, k)
    ij = cbit(i) | cbit(j)
    for y in bits(p.y):
        if mp_[y] & ij != ij:
            continue
        a, b = _nbr_in(p, y, xik), _nbr_in(p, y, xjk)
        if a and b:
            return {"y": y, "x_ik": lowest(a), "x_jk": lowest(b)}
    return None


def orthogonal_set(p: StarredPrecoloring, vertices: int) -> bool:
    """Every list in the set is {a,b} or its complement, for one pair {a,b}."""
    seen = {p.mp[v] for v in bits(vertices)}
    if len(seen) <= 1:
        return True
    if len(seen) > 2:
        return False
    a, b = seen
    return a | b == ALL and not a & b and size(a) == 2


def orthogonal_witness(p: StarredPrecoloring):
    for y in bits(p.y):
        nx = p.g.adj[y] & p.x
        if not orthogonal_set(p, nx):
            return {"y": y, "x_lists": sorted({tuple(colors(p.mp[v])) for v in bits(nx)})}
    return None


def near_roles(p: StarredPrecoloring, y: int) -> Optional[Tuple[int, int, int, int]]:
    """Roles (k, l, i, j) under which wholesome y meets the second
    near-orthogonal alternative, or None."""
    mp_ = p.mp
    comp = p.comp_of(y)
    nx = p.g.adj[y] & p.x
    for k, l in ROLE_PAIRS:
        _, _, i, j = roles(k, l)
        allowed = p.xij_mask(k, i) | p.xij_mask(k, j)
        if nx & ~allowed:
            continue
        ij = cbit(i) | cbit(j)
        if any(size(mp_[u] & ij) > 1 for u in bits(comp)):
            continue
        has_i = any(mp_[u] & cbit(i) for u in bits(comp))
        has_j = any(mp_[u] & cbit(j) for u in bits(comp))
        if has_i and has_j and all(mp_[u] & cbit(l) for u in bits(comp)):
            continue
        return k, l, i, j
    return None


def near_orthogonal_witness(p: StarredPrecoloring):
    for y in bits(p.y):
        if size(p.mp[y]) < 3:
            continue
        if orthogonal_set(p, p.g.adj[y] & p.x):
            continue
        if near_roles(p, y) is None:
            return {"y": y}
    return None


_KL_PREDICATES = {
    "clean": clean_witness,
    "tidy": tidy_witness,
    "orderly": orderly_witness,
    "spotless": spotless_witness,
}


def stage_predicate(p: StarredPrecoloring, which: str, k: Optional[int] = None,
                    l: Optional[int] = None) -> Tuple[bool, object]:
    """Evaluate a stage property.  ``which`` is one of orthogonal,
    near-orthogonal, clean, tidy, orderly, spotless; the last four take the
    ordered pair (k, l), or check all twelve pairs when k is None."""
    if which == "orthogonal":
        w = orthogonal_witness(p)
        return w is None, w
    if which in ("near", "near-orthogonal"):
        w = near_orthogonal_witness(p)
        return w is None, w
    fn = _KL_PREDICATES[which]
    pairs = ROLE_PAIRS if k is None else [(k, l)]
    for a, b in pairs:
        w = fn(p, a, b)
        if w is not None:
            if k is None:
                w = dict(w, k=a, l=b)
            return False, w
    return True, None


# ---------------------------------------------------------------------------
# JSON


def to_json(p: StarredPrecoloring) -> dict:
    return {
        "graph": format_edge_list(p.g),
        "seed": p.S,
        "x0": p.X0,
        "x": p.X,
        "ystar": p.Ystar,
        "f": {str(v): c for v, c in sorted(p.f.items())},
    }


def from_json(data) -> StarredPrecoloring:
    """Build a precolouring from parsed instance JSON; raises InvalidInstance."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise InvalidInstance("format", f"not JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidInstance("format", "instance must be a JSON object")
    missing = {"graph", "seed", "x0", "x", "ystar", "f"} - set(data)
    if missing:
        raise InvalidInstance("format", f"missing keys {sorted(missing)}")
    graph = data["graph"]
    try:
        if isinstance(graph, list):
            graph = "\n".join(graph)
        g = parse_edge_list(graph)
    except (ValueError, TypeError) as exc:
        raise InvalidInstance("format", f"bad graph: {exc}") from exc
    sets = []
    for name in ("seed", "x0", "x", "ystar"):
        vals = data[name]
        if not isinstance(vals, list) or not all(isinstance(v, int) and 0 <= v < g.n for v in vals):
            raise InvalidInstance("format", f"{name} must be a list of vertex ids below {g.n}")
        if len(set(vals)) != len(vals):
            raise InvalidInstance("format", f"{name} has duplicate ids")
        sets.append(vals)
    try:
        f = {int(k): int(v) for k, v in data["f"].items()}
    except (ValueError, AttributeError, TypeError) as exc:
        raise InvalidInstance("format", f"bad colouring map: {exc}") from exc
    for v in f:
        if not 0 <= v < g.n:
            raise InvalidInstance("format", f"coloured vertex {v} out of range")
    return StarredPrecoloring(g, *sets, f)


def coloring_to_json(c: Dict[int, int]) -> dict:
    return {"colors": {str(v): c[v] for v in sorted(c)}}


def coloring_from_json(data) -> Dict[int, int]:
    if isinstance(data, str):
        data = json.loads(data)
    return {int(k): int(v) for k, v in data["colors"].items()}
