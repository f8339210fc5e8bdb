"""Companion triples for orthogonal precolourings.

Each Y* component is replaced by a few "Z" vertices that carry lists,
the X attachments of a component are merged when they must share a colour,
and the X lists are trimmed by what the component can still absorb.  The
resulting list-colouring problem (H, L) is colourable exactly when the
precolouring has an extension.

Vertex ids of the contracted graph are the ids of the base graph; an image
keeps the smallest id of the set it replaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from .errors import InvariantViolation
from .graph_core import Graph, bits, find_induced_path, lowest, popcount
from .lists import ALL, COLORS, BadSets, bad_set_table, cbit, cmask, colors, exact_list_color, size
from .precoloring import StarredPrecoloring, is_normalized, normalize

PAIR_MASKS = [cmask(p) for p in combinations(COLORS, 2)]


# ---------------------------------------------------------------------------
# neighbour contraction


@dataclass(frozen=True)
class ContractedPrecoloring:
    """The precolouring after a sequence of neighbour contractions."""

    base: StarredPrecoloring
    adj: Tuple[int, ...]
    xt: int
    alive: int
    members: Tuple[Tuple[int, int], ...] = ()
    dead: int = 0
    log: Tuple[Tuple[int, int, int, int], ...] = ()

    @classmethod
    def start(cls, p: StarredPrecoloring) -> "ContractedPrecoloring":
        return cls(p, tuple(p.g.adj), p.x, p.g.full)

    def member_mask(self, v: int) -> int:
        """Base vertices that v stands for."""
        return dict(self.members).get(v, 1 << v)

    def attach(self, comp: int) -> int:
        """X-tilde vertices complete to ``comp``."""
        out = self.xt
        for v in bits(comp):
            out &= self.adj[v]
        return out

    def mclass(self, v: int) -> int:
        return self.base.mp[v]

    def xt_class(self, pair: int) -> int:
        mp_ = self.base.mp
        return sum(1 << v for v in bits(self.xt) if mp_[v] == pair)

    def graph(self) -> Graph:
        """G-tilde on the base id range; removed vertices are isolated."""
        return Graph.from_masks([a & self.alive if self.alive >> v & 1 else 0
                                 for v, a in enumerate(self.adj)])


def contract_neighbors(cp: ContractedPrecoloring, comp: int, pair: int) -> ContractedPrecoloring:
    """Merge the X-tilde attachments of ``comp`` whose M_P list is ``pair``."""
    mp_ = cp.base.mp
    cls = sum(1 << v for v in bits(cp.attach(comp)) if mp_[v] == pair)
    if not cls:
        raise ValueError("no attachments with that list to contract")
    rep = lowest(cls)
    if cls == 1 << rep:
        return replace(cp, log=cp.log + ((comp, pair, rep, cls),))
    adj = list(cp.adj)
    union = 0
    for v in bits(cls):
        union |= adj[v]
    union &= ~cls
    internal = any(adj[v] & cls for v in bits(cls))
    for v in bits(cls):
        adj[v] = 0
    adj[rep] = union
    for w in bits(union):
        adj[w] = (adj[w] & ~cls) | (1 << rep)
    members = dict(cp.members)
    mm = 0
    for v in bits(cls):
        mm |= members.pop(v, 1 << v)
    members[rep] = mm
    gone = cls & ~(1 << rep)
    dead = (cp.dead & ~gone) | ((1 << rep) if internal or cp.dead & cls else 0)
    return ContractedPrecoloring(cp.base, tuple(adj), cp.xt & ~gone, cp.alive & ~gone,
                                 tuple(sorted(members.items())), dead,
                                 cp.log + ((comp, pair, rep, cls),))


def check_p6free_slices(cp: ContractedPrecoloring) -> Optional[Tuple[int, int, List[int]]]:
    """None if every slice X~_ij + Y* + t is P6-free, else (pair, t, path)."""
    g = cp.graph()
    p = cp.base
    for pair in PAIR_MASKS:
        core = cp.xt_class(pair) | p.y
        for t in bits(p.s | p.x0):
            path = find_induced_path(g, 6, core | (1 << t))
            if path is not None:
                return pair, t, path
    return None


# ---------------------------------------------------------------------------
# bad sets


@dataclass
class BadSetProfile:
    comp: int
    sets: BadSets
    friendly: Dict[int, bool] = field(default_factory=dict)

    def bad(self, q: int) -> bool:
        return self.sets.is_bad(q)

    @property
    def maximal_bad(self) -> List[int]:
        return self.sets.maximal_bad


def y_lists(p: StarredPrecoloring) -> Dict[int, int]:
    """M: M_P with Y* updated once from X0."""
    mp_ = p.mp
    out = dict(mp_)
    for y in bits(p.y):
        lost = 0
        for u in bits(p.g.adj[y] & p.x0):
            lost |= cbit(p.f[u])
        out[y] = mp_[y] & ~lost
    return out


def seen_colours(p: StarredPrecoloring, comp: int) -> int:
    """Colours of S and X0 vertices with a neighbour in ``comp``."""
    out = 0
    for u in bits(p.s | p.x0):
        if p.g.adj[u] & comp:
            out |= cbit(p.f[u])
    return out


def bad_profile(p: StarredPrecoloring, comp: int, M: Optional[Dict[int, int]] = None) -> BadSetProfile:
    M = y_lists(p) if M is None else M
    sets = bad_set_table(p.g, bits(comp), M)
    seen = seen_colours(p, comp)
    friendly = {q: q & seen == q for q in sets.maximal_bad if size(q) == 2}
    return BadSetProfile(comp, sets, friendly)


# ---------------------------------------------------------------------------
# the triple


@dataclass
class CompanionTriple:
    """(H, L, h).  H ids: the X-tilde vertices first, then Z."""

    H: Graph
    L: Dict[int, int]
    h: Dict[int, int]
    hx: List[int]
    nx: int
    cp: ContractedPrecoloring
    M: Dict[int, int]
    profiles: Dict[int, BadSetProfile]

    @property
    def p(self) -> StarredPrecoloring:
        return self.cp.base

    @property
    def xt(self) -> int:
        return (1 << self.nx) - 1

    @property
    def z(self) -> int:
        return ((1 << self.H.n) - 1) & ~self.xt

    def mclass(self, v: int) -> int:
        """M_P list of an X-tilde vertex of H."""
        return self.p.mp[self.hx[v]]

    def xclass(self, pair: int) -> int:
        return sum(1 << v for v in range(self.nx) if self.mclass(v) == pair)

    def xtype(self, v: int) -> int:
        """Seed neighbourhood of an X-tilde vertex in the contracted graph."""
        return self.cp.adj[self.hx[v]] & self.p.s


def build_companion(p: StarredPrecoloring) -> Optional[CompanionTriple]:
    """The companion triple of an orthogonal precolouring.

    Returns None only when P has an empty M_P list (so no extension).
    """
    if not is_normalized(p):
        p = normalize(p)
        if p is None:
            return None
    M = y_lists(p)
    cp = ContractedPrecoloring.start(p)
    mp_ = p.mp
    profiles: Dict[int, BadSetProfile] = {}
    for comp in p.ycomps:
        if popcount(comp) < 2:
            continue
        prof = profiles[comp] = bad_profile(p, comp, M)
        sides = sorted({mp_[x] for x in bits(cp.attach(comp))})
        if len(sides) == 2:
            for side in sides:
                cp = contract_neighbors(cp, comp, side)
        elif len(sides) == 1 and prof.bad(ALL & ~sides[0]):
            cp = contract_neighbors(cp, comp, sides[0])
        elif len(sides) > 2:
            raise InvariantViolation(f"component {sorted(bits(comp))} is not orthogonal")

    # lists on X-tilde
    L = {x: (0 if cp.dead >> x & 1 else mp_[x]) for x in bits(cp.xt)}
    for comp, prof in profiles.items():
        att = cp.attach(comp)
        for i in COLORS:
            if prof.bad(ALL & ~cbit(i)):
                for x in bits(att):
                    L[x] &= ~cbit(i)
        img = {mp_[x]: x for x in bits(att)}
        if len(img) != 2:
            continue
        for pa, pb in (tuple(img), tuple(img)[::-1]):
            for i in colors(pa):
                j = (pa & ~cbit(i)).bit_length()
                for k in colors(pb):
                    l = (pb & ~cbit(k)).bit_length()
                    ik, il = cbit(i) | cbit(k), cbit(i) | cbit(l)
                    jk, jl = cbit(j) | cbit(k), cbit(j) | cbit(l)
                    if not prof.bad(ik) and prof.bad(jk) and prof.bad(jl):
                        if not prof.bad(il):
                            L[img[pa]] &= ~cbit(i)
                        else:
                            L[img[pa]] &= ~cbit(i)
                            L[img[pb]] &= ~cbit(k)

    # Z vertices
    xt_ids = list(bits(cp.xt))
    hx: List[int] = list(xt_ids)
    zlist: List[Tuple[int, int, Optional[int]]] = []  # (component, list, base vertex)
    for comp in p.ycomps:
        if popcount(comp) == 1:
            zlist.append((comp, M[lowest(comp)], lowest(comp)))
            continue
        prof = profiles[comp]
        att = cp.attach(comp)
        sides = {mp_[x] for x in bits(att)}
        if all(prof.bad(q) for q in (ALL & ~cbit(c) for c in COLORS)):
            zlist.append((comp, 0, None))
        elif len(sides) < 2:
            continue
        else:
            pa = next(iter(sides))
            others = [q for q in PAIR_MASKS if q != pa and q != ALL & ~pa]
            if all(prof.bad(q) for q in others):
                zlist.append((comp, 0, None))
                continue
            for q in prof.maximal_bad:
                if size(q) == 2 and prof.friendly[q]:
                    zlist.append((comp, ALL & ~q, None))
    nx = len(xt_ids)
    pos = {v: n for n, v in enumerate(xt_ids)}
    n = nx + len(zlist)
    adj = [0] * n
    for v in xt_ids:
        for u in bits(cp.adj[v] & cp.xt):
            adj[pos[v]] |= 1 << pos[u]
    h: Dict[int, int] = {}
    Lh: Dict[int, int] = {pos[v]: L[v] for v in xt_ids}
    for idx, (comp, lst, base_v) in enumerate(zlist):
        z = nx + idx
        h[z] = comp
        Lh[z] = lst
        hx.append(base_v if base_v is not None else -1)
        for x in bits(cp.attach(comp)):
            adj[z] |= 1 << pos[x]
            adj[pos[x]] |= 1 << z
    return CompanionTriple(Graph.from_masks(adj), Lh, h, hx, nx, cp, M, profiles)


def lift_coloring(t: CompanionTriple, c: Dict[int, int]) -> Dict[int, int]:
    """Turn a colouring of (H, L) into a precolouring extension of P."""
    p = t.p
    cp = t.cp
    out = dict(p.f)
    for v in range(t.nx):
        for b in bits(cp.member_mask(t.hx[v])):
            out[b] = c[v]
    for z, comp in t.h.items():
        if popcount(comp) == 1:
            out[lowest(comp)] = c[z]
    pos = {t.hx[v]: v for v in range(t.nx)}
    for comp in p.ycomps:
        if popcount(comp) == 1:
            continue
        used = 0
        for x in bits(cp.attach(comp)):
            used |= cbit(c[pos[x]])
        T = ALL & ~used
        part = exact_list_color(p.g, {v: t.M[v] & T for v in bits(comp)}, bits(comp))
        if part is None:
            raise InvariantViolation(f"component {sorted(bits(comp))} has no colouring from {colors(T)}")
        out.update(part)
    return out


# ---------------------------------------------------------------------------
# checks and serialisation


def near_companion_problems(t: CompanionTriple, L: Optional[Dict[int, int]] = None) -> List[str]:
    """Every failed near-companion condition, as readable strings."""
    L = t.L if L is None else L
    p, cp, H = t.p, t.cp, t.H
    probs = []
    zm = t.z
    for z in bits(zm):
        if H.adj[z] & zm:
            probs.append(f"Z not stable at {z}")
        att = cp.attach(t.h[z])
        want = sum(1 << v for v in range(t.nx) if att >> t.hx[v] & 1)
        if H.adj[z] != want:
            probs.append(f"N({z}) differs from the attachments of its component")
    for x in range(t.nx):
        if L[x] & ~t.mclass(x):
            probs.append(f"L({x}) not inside M_P")
    # f on S, X0 and the one-colour X-tilde vertices
    fx = {}
    for u in bits(p.s | p.x0):
        fx[u] = cbit(p.f[u])
    for x in range(t.nx):
        if size(L[x]) == 1:
            fx[t.hx[x]] = L[x]
    for z in bits(zm):
        comp = t.h[z]
        if L[z]:
            seen = 0
            for u, col in fx.items():
                if cp.adj[u] & comp:
                    seen |= col
            if ALL & ~L[z] & ~seen:
                probs.append(f"z={z}: a removed colour has no witness")
        for q in colors(L[z]):
            if not any(t.M[v] & cbit(q) for v in bits(comp)):
                probs.append(f"z={z}: colour {q} absent from M on its component")
            for u in bits(p.s | p.x0):
                if p.f[u] == q and all(p.g.adj[v] >> u & 1 for v in bits(comp)):
                    probs.append(f"z={z}: colour {q} used by a vertex complete to its component")
    for pair in PAIR_MASKS:
        path = find_induced_path(H, 6, t.xclass(pair) | zm)
        if path is not None:
            probs.append(f"P6 in H on class {colors(pair)}: {path}")
    return probs


def companion_to_json(t: CompanionTriple) -> dict:
    verts = []
    for v in range(t.H.n):
        if v < t.nx:
            verts.append({"id": v, "kind": "x", "members": list(bits(t.cp.member_mask(t.hx[v])))})
        else:
            verts.append({"id": v, "kind": "z", "component": list(bits(t.h[v]))})
    return {
        "vertices": verts,
        "edges": [list(e) for e in t.H.edges()],
        "lists": {str(v): colors(m) for v, m in sorted(t.L.items())},
    }
