"""2-SAT via the implication graph and strongly connected components.

Literals are ``(var, positive)`` pairs.  A unit clause is written as a
clause with the same literal twice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

Literal = Tuple[int, bool]
Clause = Tuple[Literal, Literal]


@dataclass
class TwoSatInstance:
    num_vars: int = 0
    clauses: List[Clause] = field(default_factory=list)

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars - 1

    def add_clause(self, a: Literal, b: Literal) -> None:
        for var, _ in (a, b):
            if not 0 <= var < self.num_vars:
                raise ValueError(f"variable {var} out of range")
        self.clauses.append((a, b))

    def add_unit(self, a: Literal) -> None:
        self.add_clause(a, a)


def _code(lit: Literal) -> int:
    var, pos = lit
    return 2 * var if pos else 2 * var + 1


def _scc(num_nodes: int, succ: List[List[int]]) -> List[int]:
    """Tarjan's algorithm, iterative.  Components are numbered in completion
    order, so a component's number is smaller than that of anything that can
    reach it."""
    index = [-1] * num_nodes
    low = [0] * num_nodes
    comp = [-1] * num_nodes
    on_stack = [False] * num_nodes
    stack: List[int] = []
    counter = 0
    ncomp = 0
    for root in range(num_nodes):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


def solve(inst: TwoSatInstance) -> Optional[List[bool]]:
    """Return a satisfying assignment, or None if the instance is unsatisfiable."""
    n = inst.num_vars
    succ: List[List[int]] = [[] for _ in range(2 * n)]
    for a, b in inst.clauses:
        ca, cb = _code(a), _code(b)
        # (a or b): not a -> b, not b -> a
        succ[ca ^ 1].append(cb)
        succ[cb ^ 1].append(ca)
    comp = _scc(2 * n, succ)
    out = []
    for v in range(n):
        if comp[2 * v] == comp[2 * v + 1]:
            return None
        out.append(comp[2 * v] < comp[2 * v + 1])
    return out


def verify(inst: TwoSatInstance, assignment: List[bool]) -> bool:
    if len(assignment) < inst.num_vars:
        return False
    for (va, pa), (vb, pb) in inst.clauses:
        if assignment[va] != pa and assignment[vb] != pb:
            return False
    return True


def to_dimacs(inst: TwoSatInstance, comments: Optional[List[str]] = None) -> str:
    lines = [f"p cnf {inst.num_vars} {len(inst.clauses)}"]
    for idx, (a, b) in enumerate(inst.clauses):
        if comments is not None:
            lines.append(f"c {comments[idx]}")
        lits = [(v + 1) if p else -(v + 1) for v, p in (a, b)]
        lines.append(f"{lits[0]} {lits[1]} 0")
    return "\n".join(lines) + "\n"


def from_dimacs(text: str) -> TwoSatInstance:
    inst = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            inst = TwoSatInstance(int(parts[2]))
            continue
        if inst is None:
            raise ValueError("clause before problem line")
        nums = [int(x) for x in parts]
        if nums[-1] != 0:
            raise ValueError("clause must end with 0")
        lits = [(abs(x) - 1, x > 0) for x in nums[:-1]]
        if len(lits) == 1:
            lits = lits * 2
        if len(lits) != 2:
            raise ValueError("only width-2 clauses are supported")
        inst.add_clause(lits[0], lits[1])
    if inst is None:
        raise ValueError("missing problem line")
    return inst
