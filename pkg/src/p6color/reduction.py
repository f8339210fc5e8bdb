"""From an excellent starred precolouring to orthogonal ones.

Every stage maps one precolouring to a stream of members.  The stages are
generators so that the solver can stop at the first member that extends;
``list(...)`` materialises a whole collection when tests need it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Tuple

from .errors import BudgetExceeded, InvariantViolation
from .graph_core import bits, components_mask
from .lists import cbit, size
from .precoloring import (
    ROLE_PAIRS,
    StarredPrecoloring,
    clean_witness,
    move_to_seed,
    near_orthogonal_witness,
    near_roles,
    normalize,
    orderly_witness,
    orthogonal_set,
    orthogonal_witness,
    roles,
    spotless_witness,
    tidy_witness,
    violation,
)

DEFAULT_MEMBER_CAP = 10 ** 6


class Budget:
    """Counts produced members and aborts past the cap."""

    def __init__(self, cap: int = DEFAULT_MEMBER_CAP):
        self.cap = cap
        self.count = 0

    def tick(self, n: int = 1) -> None:
        self.count += n
        if self.count > self.cap:
            raise BudgetExceeded(f"instance exceeds desk-scale budget of {self.cap} members")


def _finish(p: Optional[StarredPrecoloring], tag) -> Optional[StarredPrecoloring]:
    if p is None:
        return None
    q = normalize(p)
    if q is not None:
        q.provenance = getattr(p, "provenance", ()) + (tag,)
    return q


def _dedupe(stream: Iterable[StarredPrecoloring]) -> Iterator[StarredPrecoloring]:
    seen = set()
    for p in stream:
        if p.key not in seen:
            seen.add(p.key)
            yield p


def _types_with_list(p: StarredPrecoloring, lst: int) -> List[Tuple[int, int]]:
    """(type mask, X(T) mask) for X-types whose residual list is ``lst``."""
    return [(t, xs) for t, xs in sorted(p.x_types.items()) if p.type_list(t) == lst]


# ---------------------------------------------------------------------------
# clean and tidy share one branching scheme: per type, either nothing goes to
# the seed or one vertex x_r goes there with colour k next to a chosen
# component; neighbourhoods dominated by the chosen one are fixed to the
# other colour of the type.


def _branch_by_components(p: StarredPrecoloring, k: int, l: int, comps: List[int], tag: str):
    _, _, i, j = roles(k, l)
    types = _types_with_list(p, cbit(k) | cbit(i)) + _types_with_list(p, cbit(k) | cbit(j))
    per_type = []
    for t, xs in types:
        other = (p.type_list(t) & ~cbit(k)).bit_length()
        nbhds = sorted({p.attach_x(c) & xs for c in comps} - {0})
        options = [("none", None, None)]
        for a in nbhds:
            for x in bits(a):
                options.append(("pick", x, a))
        per_type.append((xs, other, nbhds, options))
    for choice in product(*[opts for _, _, _, opts in per_type]):
        sdd = 0
        x0dd = 0
        colours: Dict[int, int] = {}
        for (xs, other, nbhds, _), (kind, x, a) in zip(per_type, choice):
            if kind == "none":
                moved = 0
                for nb in nbhds:
                    moved |= nb
            else:
                sdd |= 1 << x
                colours[x] = k
                rest = a & ~(1 << x)
                moved = 0
                for nb in nbhds:
                    if nb & ~rest == 0:
                        moved |= nb
            x0dd |= moved
            for v in bits(moved):
                colours[v] = other
        yield _finish(move_to_seed(p, sdd, x0dd, colours), (tag, k, l))


def make_clean_step(p: StarredPrecoloring, k: int, l: int) -> Iterator[StarredPrecoloring]:
    if clean_witness(p, k, l) is None:
        yield p
        return
    _, _, i, j = roles(k, l)
    mp_ = p.mp
    ij = cbit(i) | cbit(j)
    comps = []
    for comp in p.ycomps:
        if not any(mp_[u] & cbit(k) for u in bits(comp)):
            continue
        if any(mp_[y] & ij == ij for y in bits(comp)):
            comps.append(comp)
    for q in _branch_by_components(p, k, l, comps, "clean"):
        if q is not None:
            yield q


def _tidy_components(p: StarredPrecoloring, k: int, l: int) -> List[int]:
    """Components holding a pair (y_i, y_j) joined by an l-listed path."""
    _, _, i, j = roles(k, l)
    mp_ = p.mp
    out = []
    for comp in p.ycomps:
        if not any(mp_[u] & cbit(k) for u in bits(comp)):
            continue
        lmask = 0
        for u in bits(comp):
            if mp_[u] & cbit(l):
                lmask |= 1 << u
        found = False
        for sub in components_mask(p.g, lmask):
            has_i = any(mp_[u] & cbit(i) for u in bits(sub))
            has_j = any(mp_[u] & cbit(j) for u in bits(sub))
            if has_i and has_j:
                found = True
                break
        if found:
            out.append(comp)
    return out


def make_tidy_step(p: StarredPrecoloring, k: int, l: int) -> Iterator[StarredPrecoloring]:
    if tidy_witness(p, k, l) is None:
        yield p
        return
    for q in _branch_by_components(p, k, l, _tidy_components(p, k, l), "tidy"):
        if q is not None:
            yield q


# ---------------------------------------------------------------------------
# orderly and spotless: per type choose nothing or a neighbourhood A that is
# fixed to colour k; Y vertices squeezed between the two sides take colour l.


def _branch_by_neighbourhoods(p: StarredPrecoloring, k: int, l: int, tag: str):
    _, _, i, j = roles(k, l)
    mp_ = p.mp
    g = p.g
    ij = cbit(i) | cbit(j)
    Y = [y for y in bits(p.y) if mp_[y] & ij == ij]
    side_i = _types_with_list(p, cbit(k) | cbit(i))
    side_j = _types_with_list(p, cbit(k) | cbit(j))
    if not side_i or not side_j:
        yield p
        return

    def options(xs: int) -> List[int]:
        return [0] + sorted({g.adj[y] & xs for y in Y} - {0})

    opts = [options(xs) for _, xs in side_i] + [options(xs) for _, xs in side_j]
    ni = len(side_i)
    for choice in product(*opts):
        a_sets, b_sets = choice[:ni], choice[ni:]
        x0dd = 0
        squeezed = 0
        dead = False
        for (_, xi), a in zip(side_i, a_sets):
            for (_, xj), b in zip(side_j, b_sets):
                if a and b and g.nbhd(a) & b:
                    dead = True
                    break
                t = a | b
                x0dd |= t
                for y in Y:
                    ny = g.adj[y]
                    if ny & t != t:
                        continue
                    if ny & xi & ~a and ny & xj & ~b:
                        squeezed |= 1 << y
            if dead:
                break
        if dead:
            continue
        if any(not mp_[y] & cbit(l) for y in bits(squeezed)):
            continue
        colours = {v: k for v in bits(x0dd)}
        colours.update({y: l for y in bits(squeezed)})
        q = _finish(move_to_seed(p, 0, x0dd | squeezed, colours), (tag, k, l))
        if q is not None:
            yield q


def make_orderly_step(p: StarredPrecoloring, k: int, l: int) -> Iterator[StarredPrecoloring]:
    if orderly_witness(p, k, l) is None:
        yield p
        return
    yield from _branch_by_neighbourhoods(p, k, l, "orderly")


def make_spotless_step(p: StarredPrecoloring, k: int, l: int) -> Iterator[StarredPrecoloring]:
    if spotless_witness(p, k, l) is None:
        yield p
        return
    yield from _branch_by_neighbourhoods(p, k, l, "spotless")


# ---------------------------------------------------------------------------
# composition over all twelve role pairs


def _over_all_pairs(step: Callable, stream: Iterable[StarredPrecoloring],
                    budget: Optional[Budget]) -> Iterator[StarredPrecoloring]:
    for k, l in ROLE_PAIRS:
        stream = _dedupe(_flat(step, stream, k, l, budget))
    return stream


def _flat(step, stream, k, l, budget):
    for p in stream:
        for q in step(p, k, l):
            if budget is not None:
                budget.tick()
            yield q


def _start(p: StarredPrecoloring) -> Iterator[StarredPrecoloring]:
    q = normalize(p)
    if q is not None:
        if not hasattr(q, "provenance"):
            q.provenance = ()
        yield q


def make_clean(p: StarredPrecoloring, budget: Optional[Budget] = None) -> Iterator[StarredPrecoloring]:
    return _over_all_pairs(make_clean_step, _start(p), budget)


def make_tidy(p: StarredPrecoloring, budget: Optional[Budget] = None) -> Iterator[StarredPrecoloring]:
    return _over_all_pairs(make_tidy_step, _start(p), budget)


def make_orderly(p: StarredPrecoloring, budget: Optional[Budget] = None) -> Iterator[StarredPrecoloring]:
    return _over_all_pairs(make_orderly_step, _start(p), budget)


def make_spotless(p: StarredPrecoloring, budget: Optional[Budget] = None) -> Iterator[StarredPrecoloring]:
    return _over_all_pairs(make_spotless_step, _start(p), budget)


def make_near_orthogonal(p: StarredPrecoloring, budget: Optional[Budget] = None) -> Iterator[StarredPrecoloring]:
    """Clean, then tidy, orderly and spotless; every member is checked."""
    start = list(_start(p))
    if start and near_orthogonal_witness(start[0]) is None:
        yield from start
        return
    stream: Iterable[StarredPrecoloring] = start
    for step in (make_clean_step, make_tidy_step, make_orderly_step, make_spotless_step):
        stream = _over_all_pairs(step, stream, budget)
    for q in stream:
        w = near_orthogonal_witness(q)
        if w is not None:
            raise InvariantViolation(f"member is not near-orthogonal: {w}")
        yield q


# ---------------------------------------------------------------------------
# smoothing and orthogonalization


def troublesome_components(p: StarredPrecoloring) -> List[int]:
    mp_ = p.mp
    out = []
    for comp in p.ycomps:
        if any(size(mp_[u]) >= 3 for u in bits(comp)) and not orthogonal_set(p, p.attach_x(comp)):
            out.append(comp)
    return out


def type_pairs(p: StarredPrecoloring) -> List[Tuple[int, int]]:
    """Ordered pairs of X-types whose residual lists share exactly one colour."""
    ts = sorted(p.x_types)
    return [(a, b) for a in ts for b in ts
            if a != b and size(p.type_list(a) & p.type_list(b)) == 1]


def make_smooth_candidates(p: StarredPrecoloring, budget: Optional[Budget] = None) -> Iterator[StarredPrecoloring]:
    """P itself, then P with one anticomplete pair per type pair seeded.

    Only witnesses inside troublesome components are branched on, since
    goodness is only ever used there; an orthogonal P yields just itself.
    """
    yield p
    trouble = troublesome_components(p)
    if not trouble:
        return
    mp_ = p.mp
    g = p.g
    per_pair = []
    for t1, t2 in type_pairs(p):
        lst = p.type_list(t1)
        common = (lst & p.type_list(t2)).bit_length()
        x1, x2 = p.x_types[t1], p.x_types[t2]
        opts = {None}
        for comp in trouble:
            att = p.attach_x(comp)
            if not att & x1 or not att & x2:
                continue
            if not any(mp_[y] & lst == lst for y in bits(comp)):
                continue
            for a in bits(att & x1):
                for b in bits(att & x2 & ~g.adj[a]):
                    opts.add((a, b))
        if len(opts) > 1:
            per_pair.append((common, sorted(opts, key=lambda o: (-1, -1) if o is None else o)))
    seen = {p.key}
    for choice in product(*[o for _, o in per_pair]):
        colours: Dict[int, int] = {}
        clash = False
        for (common, _), pick in zip(per_pair, choice):
            if pick is None:
                continue
            for v in pick:
                if colours.get(v, common) != common:
                    clash = True
                colours[v] = common
        if clash or not colours:
            continue
        sdd = sum(1 << v for v in colours)
        q = _finish(move_to_seed(p, sdd, 0, colours), ("smooth",))
        if budget is not None:
            budget.tick()
        if q is not None and q.key not in seen:
            seen.add(q.key)
            yield q


@dataclass
class OrthLift:
    """Maps a colouring of the orthogonal member back to the parent graph."""

    old_ids: List[int]
    free: Dict[int, int] = field(default_factory=dict)

    def lift(self, c: Dict[int, int]) -> Dict[int, int]:
        out = {self.old_ids[v]: col for v, col in c.items()}
        out.update(self.free)
        return out


def orthogonalize(p: StarredPrecoloring) -> Optional[Tuple[StarredPrecoloring, OrthLift]]:
    """An orthogonal precolouring of an induced subgraph, with its lift.

    Returns None when the forced moves are inconsistent, which can only
    happen when P has no good extension.
    """
    if orthogonal_witness(p) is None:
        return p, OrthLift(list(range(p.n)))
    mp_ = p.mp
    g = p.g
    moves: Dict[int, int] = {}
    free: Dict[int, int] = {}
    for comp in troublesome_components(p):
        wholesome = [u for u in bits(comp) if size(mp_[u]) >= 3]
        z = wholesome[0]
        rl = near_roles(p, z)
        if rl is None:
            raise InvariantViolation(f"troublesome component at {z} is not near-orthogonal")
        k, l, i, j = rl
        if not mp_[z] & cbit(i):
            i, j = j, i
        att = p.attach_x(comp)
        kj_only = [y for y in bits(comp) if mp_[y] == cbit(k) | cbit(j)]
        if kj_only:
            target, col = att & p.xij_mask(k, i), i
        elif (comp & (comp - 1)) or any(p.f[v] == l for v in bits(g.adj[z] & p.x0)):
            target, col = att & p.xij_mask(k, j), j
        else:
            free[z] = l
            continue
        for v in bits(target):
            if moves.get(v, col) != col:
                return None
            moves[v] = col
    moved = move_to_seed(p, 0, sum(1 << v for v in moves), moves)
    if moved is None:
        return None
    zmask = sum(1 << v for v in free)
    wmask = 0
    for comp in p.ycomps:
        if all(size(mp_[u]) < 3 for u in bits(comp)):
            wmask |= comp
    keep = g.full & ~zmask
    sub, old = g.induced(bits(keep))
    pos = {v: n for n, v in enumerate(old)}

    def remap(mask: int) -> int:
        return sum(1 << pos[v] for v in bits(mask & keep))

    f = {pos[v]: c for v, c in moved.f.items()}
    q = StarredPrecoloring(sub, remap(moved.s), remap(moved.x0), remap(moved.x | wmask),
                           remap(moved.y & ~wmask), f)
    q = normalize(q)
    if q is None:
        return None
    q.provenance = getattr(p, "provenance", ()) + (("orthogonalize", len(free)),)
    bad = violation(q)
    if bad is not None:
        raise InvariantViolation(f"orthogonalized member fails axiom {bad[0]}: {bad[1]}")
    w = orthogonal_witness(q)
    if w is not None:
        raise InvariantViolation(f"orthogonalized member is not orthogonal: {w}")
    return q, OrthLift(old, free)


def to_orthogonal_collection(p: StarredPrecoloring, budget: Optional[Budget] = None
                             ) -> Iterator[Tuple[StarredPrecoloring, OrthLift]]:
    """Near-orthogonal members, their smooth candidates, then orthogonalized."""
    seen = set()
    for near in make_near_orthogonal(p, budget):
        for cand in make_smooth_candidates(near, budget):
            out = orthogonalize(cand)
            if out is None:
                continue
            q, lift = out
            key = (q.key, tuple(lift.old_ids), tuple(sorted(lift.free.items())))
            if key in seen:
                continue
            seen.add(key)
            yield q, lift
