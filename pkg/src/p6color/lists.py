"""List assignments over the colours 1..4.

A list assignment is a ``dict`` from vertex to a 4-bit mask: bit ``c - 1``
is set iff colour ``c`` is allowed.  A colouring is a ``dict`` from vertex
to colour.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Tuple

from . import twosat
from .graph_core import Graph, bits, mask_of

ListAssignment = Dict[int, int]
Coloring = Dict[int, int]

ALL = 0b1111
COLORS = (1, 2, 3, 4)


def cbit(c: int) -> int:
    return 1 << (c - 1)


def colors(mask: int) -> List[int]:
    return [c for c in COLORS if mask >> (c - 1) & 1]


def cmask(cs: Iterable[int]) -> int:
    m = 0
    for c in cs:
        if c not in COLORS:
            raise ValueError(f"colour {c} outside 1..4")
        m |= cbit(c)
    return m


def size(mask: int) -> int:
    return bin(mask).count("1")


def only(mask: int) -> int:
    """The colour of a singleton mask."""
    if size(mask) != 1:
        raise ValueError("mask is not a singleton")
    return mask.bit_length()


def singletons(L: ListAssignment) -> List[int]:
    """X^0(L): the vertices whose list has exactly one colour."""
    return [v for v, m in L.items() if m and not m & (m - 1)]


def update_from(g: Graph, L: ListAssignment, X: Iterable[int], Y: Iterable[int]) -> ListAssignment:
    """Remove from each list in Y the colours of its neighbours in X."""
    X = list(X)
    for x in X:
        if size(L[x]) != 1:
            raise ValueError(f"vertex {x} does not have a one-colour list")
    xm = mask_of(X)
    out = dict(L)
    for v in Y:
        lost = 0
        for x in bits(g.adj[v] & xm):
            lost |= L[x]
        out[v] = L[v] & ~lost
    return out


def update_exhaustively(g: Graph, L: ListAssignment, frozen: Iterable[int] = ()) -> ListAssignment:
    """Repeat updating from X^0 until stable, within the domain of L.

    Vertices in ``frozen`` keep their lists (they still act as sources).
    """
    frozen_set = set(frozen)
    cur = dict(L)
    dom = mask_of(cur)
    adj = g.adj
    rounds = 0
    limit = 4 * max(len(cur), 1) + 1
    while True:
        single = [v for v, m in cur.items() if m and not m & (m - 1)]
        nxt = dict(cur)
        for x in single:
            col = cur[x]
            for v in bits(adj[x] & dom):
                if v not in frozen_set:
                    nxt[v] &= ~col
        rounds += 1
        if nxt == cur:
            return cur
        if rounds > limit:
            raise AssertionError("exhaustive updating exceeded 4n rounds")
        cur = nxt


def is_proper(g: Graph, c: Coloring) -> bool:
    for v, col in c.items():
        for u in bits(g.adj[v]):
            if u > v and c.get(u) == col:
                return False
    return True


def respects(L: ListAssignment, c: Coloring) -> bool:
    return all(v in c and L[v] >> (c[v] - 1) & 1 for v in L)


def edwards_two_list_color(g: Graph, L: ListAssignment, domain: Optional[Iterable[int]] = None) -> Optional[Coloring]:
    """Colour g|domain from lists of size at most two, via 2-SAT.

    Variable x_v is true when v takes the smaller colour of its list.
    """
    dom = sorted(L if domain is None else set(domain))
    for v in dom:
        if size(L[v]) > 2:
            raise ValueError(f"vertex {v} has a list of size {size(L[v])}")
        if L[v] == 0:
            return None
    var = {v: i for i, v in enumerate(dom)}
    inst = twosat.TwoSatInstance(len(dom))
    first = {v: colors(L[v])[0] for v in dom}

    def lit(v: int, col: int):
        # literal "v gets col", or None if col is not in v's list
        if not L[v] >> (col - 1) & 1:
            return None
        return (var[v], col == first[v])

    for v in dom:
        if size(L[v]) == 1:
            inst.add_unit((var[v], True))
    dm = mask_of(dom)
    for v in dom:
        for u in bits(g.adj[v] & dm):
            if u < v:
                continue
            for col in colors(L[v] & L[u]):
                a, b = lit(v, col), lit(u, col)
                inst.add_clause((a[0], not a[1]), (b[0], not b[1]))
    asg = twosat.solve(inst)
    if asg is None:
        return None
    out = {}
    for v in dom:
        cs = colors(L[v])
        out[v] = cs[0] if asg[var[v]] else cs[1]
    return out


def exact_list_color(g: Graph, L: ListAssignment, domain: Optional[Iterable[int]] = None) -> Optional[Coloring]:
    """Exact list colouring of g|domain by branching on a smallest list."""
    dom = sorted(L if domain is None else set(domain))
    dm = mask_of(dom)
    adj = g.adj
    lists = {v: L[v] for v in dom}
    if any(m == 0 for m in lists.values()):
        return None
    colouring: Coloring = {}

    def search(lists: Dict[int, int]) -> bool:
        if not lists:
            return True
        v = min(lists, key=lambda u: (size(lists[u]), u))
        options = lists[v]
        rest_base = {u: m for u, m in lists.items() if u != v}
        for col in colors(options):
            b = cbit(col)
            rest = dict(rest_base)
            dead = False
            for u in bits(adj[v] & dm):
                if u in rest and rest[u] & b:
                    rest[u] &= ~b
                    if not rest[u]:
                        dead = True
                        break
            if dead:
                continue
            colouring[v] = col
            if search(rest):
                return True
            del colouring[v]
        return False

    return dict(colouring) if search(lists) else None


@dataclass
class BadSets:
    """Goodness of every colour set of size at most three for one component."""

    good: Dict[int, bool]

    def is_bad(self, q: int) -> bool:
        return not self.good[q]

    @property
    def maximal_bad(self) -> List[int]:
        bad = [q for q, ok in self.good.items() if not ok]
        return sorted(q for q in bad if not any(r != q and r & q == q for r in bad))


def bad_set_table(g: Graph, C: Iterable[int], M: ListAssignment) -> BadSets:
    """Q is bad for C when C has no proper colouring with lists M(v) & Q."""
    C = sorted(C)
    good: Dict[int, bool] = {}
    for k in range(0, 4):
        for combo in combinations(COLORS, k):
            q = cmask(combo)
            if any(good.get(q & ~cbit(c)) for c in combo):
                good[q] = True
                continue
            sub = {v: M[v] & q for v in C}
            good[q] = exact_list_color(g, sub, C) is not None
    for q, ok in good.items():
        if not ok:
            for c in colors(q):
                if good[q & ~cbit(c)]:
                    raise AssertionError("badness is not downward closed")
    return BadSets(good)


def two_sets() -> List[int]:
    return [cmask(p) for p in combinations(COLORS, 2)]


def three_sets() -> List[int]:
    return [cmask(p) for p in combinations(COLORS, 3)]


def pair_split(pair: Tuple[int, int]) -> Tuple[int, int]:
    """Masks of {a, b} and its complement."""
    p = cmask(pair)
    return p, ALL & ~p
