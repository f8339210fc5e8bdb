"""Top-level pipeline for excellent starred precolourings.

Orthogonal members, then a companion triple per member, then insulated
list assignments, then the far sides by 2-SAT, the rest by Edwards, and
finally the merges.  Every colouring is verified before it is returned.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from .companion import build_companion, lift_coloring
from .errors import InvariantViolation, RequiresCompanionReduction
from .farside import solve_far_side
from .graph_core import bits, popcount
from .insulation import ChromaticCutset, insulate_all, merge_colorings, pair_name, z_partition
from .lists import ALL, colors, edwards_two_list_color, is_proper, respects, size
from .precoloring import StarredPrecoloring, check_extension, to_json, validate
from .reduction import DEFAULT_MEMBER_CAP, Budget, to_orthogonal_collection


@dataclass
class SolverConfig:
    seed_cap: int = 12
    member_cap: int = DEFAULT_MEMBER_CAP
    jobs: int = 1
    trace: Optional[Callable[[dict], None]] = None
    dump_cnf: Optional[Callable[[str, str], None]] = None


@dataclass
class Telemetry:
    members: int = 0
    companions: int = 0
    insulated: int = 0
    far_sides: int = 0
    swaps: int = 0
    seconds: float = 0.0
    stages: List[dict] = field(default_factory=list)


@dataclass
class SolveResult:
    coloring: Optional[Dict[int, int]]
    telemetry: Telemetry
    certificate: Optional[dict] = None


def instance_hash(p: StarredPrecoloring) -> str:
    blob = json.dumps(to_json(p), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


class _Tracer:
    def __init__(self, cfg: SolverConfig, tel: Telemetry, h: str):
        self.cfg, self.tel, self.h = cfg, tel, h
        self.t0 = time.perf_counter()

    def __call__(self, stage: str, **kw) -> None:
        ev = {"stage": stage, "input": self.h, "t": round(time.perf_counter() - self.t0, 6), **kw}
        self.tel.stages.append(ev)
        if self.cfg.trace is not None:
            self.cfg.trace(ev)


def _cut_json(cut: ChromaticCutset) -> dict:
    return {"pair": pair_name(cut.p1), "D": list(bits(cut.D)), "A": list(bits(cut.A))}


def _solve_insulated(t, L: Dict[int, int], cuts: Dict[int, ChromaticCutset], tel: Telemetry,
                     emit, cfg: SolverConfig, tag: str) -> Optional[Dict[int, int]]:
    """Colour (H, L) from the far sides, the remainder and the merges."""
    H = t.H
    far = {}
    for p1, cut in sorted(cuts.items()):
        tel.far_sides += 1
        res = solve_far_side(H, L, cut, t.xclass(p1), t.xclass(ALL & ~p1))
        if cfg.dump_cnf is not None and res.encoding is not None:
            cfg.dump_cnf(f"{tag}-{pair_name(p1)}", res.encoding.dimacs())
        emit("farside", pair=pair_name(p1), colourable=res.coloring is not None, reason=res.reason,
             clauses=len(res.encoding.tags) if res.encoding else 0)
        if res.coloring is None:
            return None
        far[p1] = res.coloring
    removed = 0
    for cut in cuts.values():
        removed |= cut.complex_part(H, L) | cut.A
    rest = [v for v in range(H.n) if not removed >> v & 1]
    for v in rest:
        if size(L[v]) > 2:
            raise InvariantViolation(f"remainder vertex {v} has list {colors(L[v])}")
    cur = edwards_two_list_color(H, L, rest)
    emit("edwards", vertices=len(rest), colourable=cur is not None)
    if cur is None:
        return None
    for p1, cut in sorted(cuts.items()):
        near = cut.D | cut.A
        known = sum(1 << v for v in cur)
        local = ChromaticCutset(cut.D, cut.A, known & ~near, p1)
        cur, swaps = merge_colorings(H, L, local, cur, far[p1])
        tel.swaps += swaps
        emit("merge", pair=pair_name(p1), swaps=swaps)
    if set(cur) != set(range(H.n)) or not is_proper(H, cur) or not respects(L, cur):
        raise InvariantViolation("assembled companion colouring fails verification")
    return cur


def _solve_member(idx: int, q: StarredPrecoloring, cfg: SolverConfig, tel: Telemetry, emit
                  ) -> Optional[tuple]:
    """Colour one orthogonal member; returns (colouring of q, certificate)."""
    budget = Budget(cfg.member_cap)
    t = build_companion(q)
    if t is None:
        emit("companion", member=idx, built=False)
        return None
    tel.companions += 1
    empty = [v for v, m in t.L.items() if m == 0]
    emit("companion", member=idx, built=True, vertices=t.H.n, z=popcount(t.z), empty=len(empty))
    if empty:
        return None
    zs = z_partition(t)
    for k, (L, cuts) in enumerate(insulate_all(t, budget=budget)):
        tel.insulated += 1
        emit("insulate", member=idx, assignment=k, cuts=[pair_name(p) for p in sorted(cuts)])
        c = _solve_insulated(t, L, cuts, tel, emit, cfg, f"m{idx}-l{k}")
        if c is None:
            continue
        cert = {
            "member": idx,
            "assignment": k,
            "seed_size": popcount(q.s),
            "companion_vertices": t.H.n,
            "z_partition": {pair_name(p): list(bits(m)) for p, m in zs.items()},
            "lists": {str(v): colors(m) for v, m in sorted(L.items())},
            "cuts": [_cut_json(cuts[p]) for p in sorted(cuts)],
        }
        return lift_coloring(t, c), cert
    return None


def _member_job(args):
    idx, q, cfg = args
    cfg = SolverConfig(cfg.seed_cap, cfg.member_cap, 1)
    tel = Telemetry()
    out = _solve_member(idx, q, cfg, tel, lambda *a, **k: None)
    return out, tel


def solve_excellent(p: StarredPrecoloring, config: Optional[SolverConfig] = None) -> SolveResult:
    """Extension of p, or None when none exists.

    Raises InvalidInstance for bad input, BudgetExceeded when a collection
    passes the member cap, and InvariantViolation if an internal check fails.
    """
    cfg = config or SolverConfig()
    validate(p)
    if popcount(p.s) > cfg.seed_cap:
        from .errors import InvalidInstance
        raise InvalidInstance("seed", f"seed has {popcount(p.s)} vertices, cap is {cfg.seed_cap}")
    tel = Telemetry()
    emit = _Tracer(cfg, tel, instance_hash(p))
    start = time.perf_counter()
    budget = Budget(cfg.member_cap)
    emit("input", vertices=p.n, seed=popcount(p.s), x=popcount(p.x), ystar=popcount(p.y))
    found = None
    if cfg.jobs > 1:
        members = list(to_orthogonal_collection(p, budget))
        tel.members = len(members)
        emit("orthogonal", members=len(members), seed_sizes=sorted({popcount(q.s) for q, _ in members}))
        with ProcessPoolExecutor(cfg.jobs) as pool:
            jobs = [(i, q, cfg) for i, (q, _) in enumerate(members)]
            for (q, lift), (out, sub) in zip(members, pool.map(_member_job, jobs)):
                for name in ("companions", "insulated", "far_sides", "swaps"):
                    setattr(tel, name, getattr(tel, name) + getattr(sub, name))
                if out is not None:
                    found = (lift, out)
                    break
    else:
        for idx, (q, lift) in enumerate(to_orthogonal_collection(p, budget)):
            tel.members += 1
            emit("orthogonal", member=idx, seed_size=popcount(q.s), vertices=q.n)
            out = _solve_member(idx, q, cfg, tel, emit)
            if out is not None:
                found = (lift, out)
                break
    tel.seconds = time.perf_counter() - start
    if found is None:
        emit("done", colourable=False, members=tel.members, seconds=round(tel.seconds, 6))
        return SolveResult(None, tel)
    lift, (cq, cert) = found
    c = lift.lift(cq)
    if not check_extension(p, c):
        raise InvariantViolation("final colouring is not a precolouring extension")
    emit("done", colourable=True, members=tel.members, seconds=round(tel.seconds, 6))
    return SolveResult(c, tel, cert)


def solve_full_stub(g, X0, f):
    """General entry point for a graph with a precoloured set X0.

    Reaching an excellent starred precolouring from arbitrary input needs
    the seed-finding reduction built on the Y-axioms theorem, which this
    package does not implement; use solve_excellent on an excellent
    starred precolouring instead.
    """
    raise RequiresCompanionReduction(
        "general precolouring extension requires the Y-axioms theorem (seed-finding "
        "reduction), which is not implemented; call solve_excellent on an excellent "
        "starred precolouring")
