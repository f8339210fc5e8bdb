"""Simple undirected graphs on vertices 0..n-1 with bitmask adjacency.

Vertex sets are passed around either as iterables of ids or, inside hot
loops, as Python int bitmasks (bit v set iff v is in the set).  The helpers
``bits`` and ``mask_of`` convert between the two.
"""

from __future__ import annotations

from typing import Iterable, Iterator, List, Optional, Sequence, Tuple


def bits(mask: int) -> Iterator[int]:
    """Yield the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class Graph:
    """Immutable simple graph.

    >>> g = Graph(3, [(0, 1), (1, 2)])
    >>> g.adjacent(0, 1), g.adjacent(0, 2)
    (True, False)
    """

    __slots__ = ("n", "adj", "_m")

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        adj = [0] * n
        m = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if adj[u] >> v & 1:
                raise ValueError(f"duplicate edge ({u}, {v})")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
            m += 1
        self.n = n
        self.adj = tuple(adj)
        self._m = m

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> "Graph":
        g = cls.__new__(cls)
        g.n = len(masks)
        g.adj = tuple(masks)
        g._m = sum(popcount(a) for a in masks) // 2
        for v, a in enumerate(masks):
            if a >> v & 1:
                raise ValueError(f"self-loop at {v}")
            for u in bits(a):
                if not g.adj[u] >> v & 1:
                    raise ValueError("adjacency is not symmetric")
        return g

    @property
    def m(self) -> int:
        return self._m

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> List[int]:
        return list(bits(self.adj[v]))

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def nbhd(self, mask: int) -> int:
        """Union of the neighbourhoods of the vertices in ``mask``."""
        out = 0
        for v in bits(mask):
            out |= self.adj[v]
        return out

    def induced(self, vertices: Iterable[int]) -> Tuple["Graph", List[int]]:
        """Return ``(G|vertices, old_ids)``; new vertex i is old vertex old_ids[i]."""
        old = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(old)}
        keep = mask_of(old)
        masks = []
        for v in old:
            masks.append(mask_of(pos[u] for u in bits(self.adj[v] & keep)))
        return Graph.from_masks(masks), old

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.adj == other.adj

    def __hash__(self) -> int:
        return hash(self.adj)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _within(g: Graph, within) -> int:
    if within is None:
        return g.full
    if isinstance(within, int):
        return within
    m = mask_of(within)
    if m >> g.n:
        raise ValueError("vertex set exceeds graph")
    return m


def find_induced_path(g: Graph, t: int, within=None) -> Optional[List[int]]:
    """Smallest induced path on ``t`` vertices inside ``within``, or None.

    The search grows partial induced paths depth first, trying start vertices
    and extensions in increasing id order, so the answer is the
    lexicographically smallest vertex sequence among all induced P_t's.
    """
    if t < 1:
        raise ValueError("t must be positive")
    allowed = _within(g, within)
    if popcount(allowed) < t:
        return None
    adj = g.adj
    path: List[int] = []

    def grow(last: int, blocked: int) -> bool:
        if len(path) == t:
            return True
        # blocked = closed neighbourhoods of every path vertex except `last`
        cand = adj[last] & allowed & ~blocked
        closed_last = adj[last] | (1 << last)
        for w in bits(cand):
            path.append(w)
            if grow(w, blocked | closed_last):
                return True
            path.pop()
        return False

    for s in bits(allowed):
        path.append(s)
        if grow(s, 1 << s):
            return path
        path.pop()
    return None


def is_pt_free(g: Graph, t: int) -> bool:
    return find_induced_path(g, t) is None


def components_mask(g: Graph, within: int) -> List[int]:
    """Components of g|within as bitmasks, ordered by smallest member."""
    out = []
    rest = within
    adj = g.adj
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            v = lowest(frontier)
            frontier &= frontier - 1
            new = adj[v] & rest & ~comp
            comp |= new
            frontier |= new
        out.append(comp)
        rest &= ~comp
    return out


def components(g: Graph, within=None) -> List[List[int]]:
    return [list(bits(c)) for c in components_mask(g, _within(g, within))]


def bipartition_mask(g: Graph, within: int) -> Optional[List[Tuple[int, int]]]:
    """Per component of g|within, its two colour classes as masks.

    The smallest vertex of each component lies in the first class.  Returns
    None if some component has an odd cycle.
    """
    out = []
    adj = g.adj
    for comp in components_mask(g, within):
        first = comp & -comp
        side = [first, 0]
        frontier = [(lowest(first), 0)]
        seen = first
        while frontier:
            v, s = frontier.pop()
            nb = adj[v] & comp
            if nb & side[s]:
                return None
            new = nb & ~seen
            side[1 - s] |= new
            seen |= new
            for w in bits(new):
                frontier.append((w, 1 - s))
        # a final pass catches odd cycles closed by edges seen before colouring
        for v in bits(side[0]):
            if adj[v] & side[0]:
                return None
        for v in bits(side[1]):
            if adj[v] & side[1]:
                return None
        out.append((side[0], side[1]))
    return out


def bipartition(g: Graph, within=None) -> Optional[List[Tuple[List[int], List[int]]]]:
    parts = bipartition_mask(g, _within(g, within))
    if parts is None:
        return None
    return [(list(bits(a)), list(bits(b))) for a, b in parts]


def relation_of(g: Graph, a: int, B) -> str:
    """'complete', 'anticomplete' or 'mixed'.  An empty B counts as complete."""
    bm = _within(g, B)
    if bm >> a & 1:
        raise ValueError("a must not lie in B")
    hit = g.adj[a] & bm
    if hit == bm:
        return "complete"
    if hit == 0:
        return "anticomplete"
    return "mixed"


def attachments(g: Graph, A, B) -> List[int]:
    """Vertices of B complete to A."""
    am = _within(g, A)
    bm = _within(g, B)
    if am & bm:
        raise ValueError("A and B must be disjoint")
    out = bm
    for v in bits(am):
        out &= g.adj[v]
    return list(bits(out))


def parse_edge_list(text: str) -> Graph:
    """Parse ``p n m`` followed by ``e u v`` lines (0-indexed)."""
    n = None
    declared = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None or len(parts) != 3:
                raise ValueError(f"line {lineno}: bad problem line")
            n, declared = int(parts[1]), int(parts[2])
        elif parts[0] == "e":
            if n is None:
                raise ValueError(f"line {lineno}: edge before problem line")
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: bad edge line")
            edges.append((int(parts[1]), int(parts[2])))
        else:
            raise ValueError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise ValueError("missing problem line")
    if declared != len(edges):
        raise ValueError(f"declared {declared} edges, found {len(edges)}")
    return Graph(n, edges)


def format_edge_list(g: Graph) -> str:
    lines = [f"p {g.n} {g.m}"]
    lines += [f"e {u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"
