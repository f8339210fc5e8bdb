"""Colouring the far side of an insulating cutset through 2-SAT.

With the split P1 / P2, each far-side vertex z gets one boolean: true
means z takes a colour from P1.  Pairwise clauses forbid the short odd
patterns through the cutset; once the truth values are fixed, each side
is a two-colour problem that reduces to a bipartiteness test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import twosat
from .errors import InvariantViolation
from .graph_core import Graph, bipartition_mask, bits
from .insulation import ChromaticCutset
from .lists import ALL, colors, edwards_two_list_color, is_proper, respects, size, update_exhaustively


def _side_touch(H: Graph, bip: List[Tuple[int, int]], v: int) -> List[Tuple[bool, bool]]:
    """For each component, whether v has neighbours in its first/second class."""
    return [(bool(H.adj[v] & a), bool(H.adj[v] & b)) for a, b in bip]


def preprocess_lists(H: Graph, L: Dict[int, int], D: int, zp: int, x12: int, x34: int,
                     p1: int) -> Optional[Dict[int, int]]:
    """Lists on D + Z^P1 after exhaustive updating and the both-sides rule.

    A vertex outside X~_P1 with neighbours on both sides of a component of
    H|(D & X~_P1) loses P1 (likewise for P2); updating is repeated until
    nothing changes.  Returns None if the two-colour parts are not bipartite.
    """
    p2 = ALL & ~p1
    dom = D | zp
    bip12 = bipartition_mask(H, D & x12)
    bip34 = bipartition_mask(H, D & x34)
    if bip12 is None or bip34 is None:
        return None
    cur = {v: L[v] for v in bits(dom)}
    while True:
        nxt = update_exhaustively(H, cur)
        for v in bits(dom & ~x12):
            if any(a and b for a, b in _side_touch(H, bip12, v)):
                nxt[v] &= ~p1
        for v in bits(dom & ~x34):
            if any(a and b for a, b in _side_touch(H, bip34, v)):
                nxt[v] &= ~p2
        if nxt == cur:
            return cur
        cur = nxt


@dataclass
class FarSideEncoding:
    """The 2-SAT instance with one tag per clause (its family, 1 to 8)."""

    var_of: Dict[int, int]
    inst: twosat.TwoSatInstance
    tags: List[Tuple[int, Tuple[int, ...]]] = field(default_factory=list)

    def dimacs(self) -> str:
        head = "".join(f"c var {v + 1} = far-side vertex {z}\n" for z, v in sorted(self.var_of.items()))
        notes = [f"family {fam} on vertices {list(zs)}" for fam, zs in self.tags]
        return head + twosat.to_dimacs(self.inst, notes)


def build_encoding(H: Graph, L: Dict[int, int], D: int, zp: int, x12: int, x34: int,
                   p1: int) -> FarSideEncoding:
    """Clauses of families 1 to 8 over the far-side vertices."""
    p2 = ALL & ~p1
    zs = list(bits(zp))
    var_of = {z: n for n, z in enumerate(zs)}
    inst = twosat.TwoSatInstance(len(zs))
    enc = FarSideEncoding(var_of, inst)

    def add(fam, za, zb, positive):
        inst.add_clause((var_of[za], positive), (var_of[zb], positive))
        enc.tags.append((fam, (za, zb)))

    for base, pq, positive in ((0, p1, False), (3, p2, True)):
        bip = bipartition_mask(H, D & (x12 if pq == p1 else x34)) or []
        touch = {z: _side_touch(H, bip, z) for z in zs}

        def same_side(za, zb):
            return any((a1 and a2) or (b1 and b2) for (a1, b1), (a2, b2) in zip(touch[za], touch[zb]))

        def opposite(za, zb):
            return any((a1 and b2) or (b1 and a2) for (a1, b1), (a2, b2) in zip(touch[za], touch[zb]))

        pending = []
        for ia, za in enumerate(zs):
            for zb in zs[ia + 1:]:
                sa, sb = L[za] & pq, L[zb] & pq
                single = size(sa) == 1 and size(sb) == 1
                if single and sa != sb and same_side(za, zb):
                    add(base + 1, za, zb, positive)
                if single and sa == sb and opposite(za, zb):
                    add(base + 2, za, zb, positive)
                if same_side(za, zb) and opposite(za, zb):
                    pending.append((za, zb))
        for za, zb in pending:
            add(base + 3, za, zb, positive)
    for z in zs:
        if not L[z] & ~p1:
            add(7, z, z, True)
        if not L[z] & ~p2:
            add(8, z, z, False)
    return enc


def _color_side(H: Graph, LA: Dict[int, int], pair: int) -> Optional[Dict[int, int]]:
    """Colour H|A from lists inside a two-colour set, via the graph F.

    F is H restricted to the two-colour vertices plus two adjacent hubs,
    one per colour, joined to the vertices with a neighbour forced to that
    colour.  A 2-colouring of F gives the colouring.
    """
    a, b = colors(pair)
    forced = {a: 0, b: 0}
    free = 0
    for v, m in LA.items():
        if m == 0:
            raise InvariantViolation(f"vertex {v} has no colour on its side")
        if m == pair:
            free |= 1 << v
        else:
            forced[m.bit_length()] |= 1 << v
    n = H.n
    hub = {a: n, b: n + 1}
    adj = [0] * (n + 2)
    for v in bits(free):
        adj[v] = H.adj[v] & free
        for c in (a, b):
            if H.adj[v] & forced[c]:
                adj[v] |= 1 << hub[c]
                adj[hub[c]] |= 1 << v
    adj[hub[a]] |= 1 << hub[b]
    adj[hub[b]] |= 1 << hub[a]
    F = Graph.from_masks(adj)
    bip = bipartition_mask(F, free | (1 << hub[a]) | (1 << hub[b]))
    if bip is None:
        return None
    out = {}
    for c in (a, b):
        for v in bits(forced[c]):
            out[v] = c
    for s0, s1 in bip:
        if (s0 | s1) >> hub[a] & 1:
            first = a if s0 >> hub[a] & 1 else b
        else:
            first = a
        other = b if first == a else a
        for v in bits(s0 & free):
            out[v] = first
        for v in bits(s1 & free):
            out[v] = other
    return out


@dataclass
class FarSideResult:
    coloring: Optional[Dict[int, int]]
    encoding: Optional[FarSideEncoding] = None
    reason: str = ""


def solve_far_side(H: Graph, L: Dict[int, int], cut: ChromaticCutset, x12: int, x34: int
                   ) -> FarSideResult:
    """Colour H|(D + A) from L, where A is the far side of ``cut``.

    ``x12`` and ``x34`` are the X-tilde classes of the split.
    """
    D, zp, p1 = cut.D, cut.A, cut.p1
    p2 = ALL & ~p1
    for part in (D & x12, D & x34):
        if edwards_two_list_color(H, L, bits(part)) is None:
            return FarSideResult(None, reason="cutset side has no two-list colouring")
    Lp = preprocess_lists(H, L, D, zp, x12, x34, p1)
    if Lp is None:
        return FarSideResult(None, reason="cutset side not bipartite")
    if any(m == 0 for m in Lp.values()):
        return FarSideResult(None, reason="empty list after updating")
    enc = build_encoding(H, Lp, D, zp, x12, x34, p1)
    asg = twosat.solve(enc.inst)
    if asg is None:
        return FarSideResult(None, enc, reason="2-SAT unsatisfiable")
    a_side = D & x12
    b_side = D & x34
    for z, var in enc.var_of.items():
        if asg[var]:
            a_side |= 1 << z
        else:
            b_side |= 1 << z
    out: Dict[int, int] = {}
    for side, pq in ((a_side, p1), (b_side, p2)):
        part = _color_side(H, {v: Lp[v] & pq for v in bits(side)}, pq)
        if part is None:
            raise InvariantViolation(f"side {colors(pq)} is not bipartite under a satisfying assignment")
        out.update(part)
    if not is_proper(H, out) or not respects({v: L[v] for v in out}, out):
        raise InvariantViolation("far-side colouring fails verification")
    return FarSideResult(out, enc)
