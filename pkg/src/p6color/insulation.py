"""Insulating cutsets: recognition, construction and the merge.

A colour pair is handled as ``P1`` (the pair containing colour 1) and its
complement ``P2``; the pairs 12, 13 and 14 are the three ways to split the
colours.  Vertex sets are bitmasks over the vertices of H.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, List, Optional, Tuple

from .errors import InvariantViolation
from .graph_core import Graph, bipartition_mask, bits, components_mask
from .lists import ALL, cbit, colors, is_proper, size, update_exhaustively
from .reduction import Budget

PAIRS_WITH_ONE = [cbit(1) | cbit(i) for i in (2, 3, 4)]


def pair_name(p1: int) -> str:
    return "".join(str(c) for c in colors(p1))


@dataclass(frozen=True)
class ChromaticCutset:
    """D, the far side A and the rest B, for the split P1 / P2."""

    D: int
    A: int
    B: int
    p1: int

    @property
    def p2(self) -> int:
        return ALL & ~self.p1

    def part(self, L: Dict[int, int], pq: int) -> int:
        """D_pq: vertices of D whose list lies inside pq."""
        return sum(1 << d for d in bits(self.D) if not L[d] & ~pq)

    def complex_part(self, H: Graph, L: Dict[int, int]) -> int:
        """Union of the components of H|D_pq where every list has two colours."""
        out = 0
        for pq in (self.p1, self.p2):
            for comp in components_mask(H, self.part(L, pq)):
                if all(size(L[d]) == 2 for d in bits(comp)):
                    out |= comp
        return out


def z_partition(t) -> Dict[int, int]:
    """Z^{1i} for i = 2, 3, 4, keyed by the mask of {1, i}.

    A Z vertex goes to the first split whose classes contain all of its
    neighbours; only a vertex with no neighbours fits more than one.
    """
    out = {p1: 0 for p1 in PAIRS_WITH_ONE}
    for z in bits(t.z):
        cls = {t.mclass(x) for x in bits(t.H.adj[z])}
        for p1 in PAIRS_WITH_ONE:
            if cls <= {p1, ALL & ~p1}:
                out[p1] |= 1 << z
                break
        else:
            raise InvariantViolation(f"Z vertex {z} sees more than one split")
    return out


# ---------------------------------------------------------------------------
# recognition


def is_insulating(H: Graph, L: Dict[int, int], cut: ChromaticCutset) -> Optional[Tuple[str, object]]:
    """None when ``cut`` is insulating for its split, else (condition, witness)."""
    D, A, B = cut.D, cut.A, cut.B
    full = (1 << H.n) - 1
    if D & A or D & B or A & B or (D | A | B) != full:
        return "partition", None
    if not A:
        return "far side empty", None
    for a in bits(A):
        for b in bits(H.adj[a] & B):
            if L[a] & L[b]:
                return "chromatic", (a, b)
    for d in bits(D):
        if L[d] & ~cut.p1 and L[d] & ~cut.p2:
            return "split", d
    for pq in (cut.p1, cut.p2):
        part = cut.part(L, pq)
        for comp in components_mask(H, part):
            bip = bipartition_mask(H, comp)
            if bip is None:
                return "bipartite", comp
            d1, d2 = bip[0]
            sizes = {size(L[d]) for d in bits(comp)}
            if len(sizes) > 1:
                return "list sizes", comp
            near = H.nbhd(comp)
            if not any(L[a] & pq for a in bits(A & near)):
                return "anchor", comp
            if sizes != {2}:
                continue
            for i in colors(pq):
                j = (pq & ~cbit(i)).bit_length()
                for ds, dt in ((d1, d2), (d2, d1)):
                    for a in bits(A & H.nbhd(ds)):
                        if not L[a] & cbit(i):
                            continue
                        for b in bits(B & near):
                            if H.adj[b] & ds and L[b] & cbit(j):
                                return "cross list", (a, b, comp)
                            if H.adj[b] & dt and L[b] & cbit(i):
                                return "cross list", (a, b, comp)
    return None


# ---------------------------------------------------------------------------
# merging


def _conflicts(H: Graph, c1: Dict[int, int], c2: Dict[int, int], near: int, far: int) -> List[Tuple[int, int]]:
    out = []
    for u in bits(near):
        for v in bits(H.adj[u] & far):
            if c2[u] == c1[v]:
                out.append((u, v))
    return out


def merge_colorings(H: Graph, L: Dict[int, int], cut: ChromaticCutset,
                    c1: Dict[int, int], c2: Dict[int, int]) -> Tuple[Dict[int, int], int]:
    """Combine a colouring c1 of B + D'' with a colouring c2 of A + D.

    Conflicts (an edge from a complex part of D to B with equal colours)
    are removed by swapping the two colours on one complex component of c2.
    Returns the merged colouring and the number of swaps.
    """
    cplx = cut.complex_part(H, L)
    near = cut.A | cut.D
    comp_of: Dict[int, int] = {}
    for pq in (cut.p1, cut.p2):
        for comp in components_mask(H, cut.part(L, pq) & cplx):
            for d in bits(comp):
                comp_of[d] = comp
    c2 = dict(c2)
    conflicts = _conflicts(H, c1, c2, near, cut.B)
    limit = H.n * H.n
    swaps = 0
    while conflicts:
        u, _ = conflicts[0]
        if u not in comp_of:
            raise InvariantViolation(f"conflict at {u}, which is not in a complex component")
        comp = comp_of[u]
        pair = L[u]
        for d in bits(comp):
            c2[d] = colors(pair & ~cbit(c2[d]))[0]
        swaps += 1
        if not is_proper(H, c2):
            raise InvariantViolation("swap broke properness on the far side")
        nxt = _conflicts(H, c1, c2, near, cut.B)
        if len(nxt) >= len(conflicts):
            raise InvariantViolation("swap did not reduce the number of conflicts")
        if swaps > limit:
            raise InvariantViolation("merge exceeded |V|^2 swaps")
        conflicts = nxt
    out = {v: c1[v] for v in bits(cut.B)}
    out.update({v: c2[v] for v in bits(near)})
    return out, swaps


# ---------------------------------------------------------------------------
# construction


def _grandchildren(H: Graph, comps: List[int], zp: int, xs: int) -> Dict[int, int]:
    """For each x in xs, the Z vertices sharing a component's neighbourhood."""
    zs_of = [sum(1 << z for z in bits(zp) if H.adj[z] & c) for c in comps]
    out = {}
    for x in bits(xs):
        g = 0
        for c, zs in zip(comps, zs_of):
            if H.adj[x] & c:
                g |= zs
        out[x] = g
    return out


def _both_sides(H: Graph, bip: List[Tuple[int, int]], v: int) -> bool:
    return any(H.adj[v] & a and H.adj[v] & b for a, b in bip)


def find_cutset(t, L: Dict[int, int], p1: int, zp: int) -> ChromaticCutset:
    """Components of H|X~_P1 and H|X~_P2 that meet a Z^P1 vertex through a
    shared colour, with Z^P1 as the far side."""
    H = t.H
    D = 0
    for pq in (p1, ALL & ~p1):
        for comp in components_mask(H, t.xclass(pq)):
            if any(L[x] & L[z] for x in bits(comp) for z in bits(H.adj[x] & zp)):
                D |= comp
    full = (1 << H.n) - 1
    return ChromaticCutset(D, zp, full & ~D & ~zp, p1)


def insulate(t, L: Dict[int, int], p1: int, zp: int,
             budget: Optional[Budget] = None) -> Iterator[Tuple[Dict[int, int], Optional[ChromaticCutset]]]:
    """Refined list assignments, each with an insulating cutset for P1.

    Assignments with an empty list are dropped, as are repeats.
    """
    H = t.H
    if not zp:
        yield L, None
        return
    p2 = ALL & ~p1
    x12, x34 = t.xclass(p1), t.xclass(p2)
    bip12 = bipartition_mask(H, x12)
    bip34 = bipartition_mask(H, x34)
    if bip12 is None or bip34 is None:
        return
    comps12 = [a | b for a, b in bip12]
    comps34 = [a | b for a, b in bip34]
    mixed = t.xt & ~x12 & ~x34
    g12 = _grandchildren(H, comps12, zp, mixed)
    g34 = _grandchildren(H, comps34, zp, mixed)
    types: Dict[int, int] = {}
    for x in bits(mixed):
        types[t.xtype(x)] = types.get(t.xtype(x), 0) | (1 << x)
    base = dict(L)
    for x in bits(t.xt & ~x12):
        if _both_sides(H, bip12, x):
            base[x] &= ~p1
    for x in bits(t.xt & ~x34):
        if _both_sides(H, bip34, x):
            base[x] &= ~p2
    type_list = [types[k] for k in sorted(types)]
    per_type = []
    for members in type_list:
        qs = [None] + [q for q in bits(members) if L[q] & p1 and g12[q]]
        ps = [None] + [p for p in bits(members) if L[p] & p2 and g34[p]]
        per_type.append([(q, p) for q in qs for p in ps if q is None or q != p])
    seen = set()
    for choice in product(*per_type):
        if budget is not None:
            budget.tick()
        lq = dict(base)
        for members, (q, p) in zip(type_list, choice):
            if q is not None:
                lq[q] &= p1
                for x in bits(members):
                    if g12[q] & g12[x] == g12[q] and g12[x] != g12[q]:
                        lq[x] &= ~p1
            else:
                for x in bits(members):
                    if x != p and g12[x]:
                        lq[x] &= ~p1
            if p is not None:
                lq[p] &= p2
                for x in bits(members):
                    if g34[p] & g34[x] == g34[p] and g34[x] != g34[p]:
                        lq[x] &= ~p2
            else:
                for x in bits(members):
                    if x != q and g34[x]:
                        lq[x] &= ~p2
        lq = update_exhaustively(H, lq)
        if any(m == 0 for m in lq.values()):
            continue
        key = tuple(sorted(lq.items()))
        if key in seen:
            continue
        seen.add(key)
        cut = find_cutset(t, lq, p1, zp)
        bad = is_insulating(H, lq, cut)
        if bad is not None:
            raise InvariantViolation(f"constructed {pair_name(p1)} cutset fails: {bad}")
        yield lq, cut


def insulate_all(t, L: Optional[Dict[int, int]] = None, budget: Optional[Budget] = None
                 ) -> Iterator[Tuple[Dict[int, int], Dict[int, ChromaticCutset]]]:
    """Insulated list assignments for the splits 12, 13, 14 in turn.

    Each result carries one cutset per split with a non-empty far side,
    re-checked against the final lists.
    """
    L = t.L if L is None else L
    zs = z_partition(t)

    def go(idx: int, cur: Dict[int, int], cuts: Dict[int, ChromaticCutset]):
        if idx == len(PAIRS_WITH_ONE):
            yield cur, cuts
            return
        p1 = PAIRS_WITH_ONE[idx]
        for lq, cut in insulate(t, cur, p1, zs[p1], budget):
            nxt = dict(cuts)
            if cut is not None:
                nxt[p1] = cut
            yield from go(idx + 1, lq, nxt)

    for final, cuts in go(0, dict(L), {}):
        fixed = {}
        for p1, cut in cuts.items():
            if is_insulating(t.H, final, cut) is not None:
                cut = find_cutset(t, final, p1, cut.A)
                bad = is_insulating(t.H, final, cut)
                if bad is not None:
                    raise InvariantViolation(f"{pair_name(p1)} cutset lost insulation: {bad}")
            fixed[p1] = cut
        yield final, fixed
