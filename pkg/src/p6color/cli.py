"""Command-line entry point: ``p6color <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .companion import build_companion, companion_to_json
from .errors import BudgetExceeded, InvalidInstance, InvariantViolation, RequiresCompanionReduction
from .graph_core import find_induced_path, is_pt_free, parse_edge_list
from .oracle_gen import GenParams, brute_force_extension, gen_excellent
from .precoloring import coloring_to_json, from_json, to_json, validate
from .reduction import to_orthogonal_collection
from .solver import SolverConfig, solve_excellent, solve_full_stub

EXIT_COLORED, EXIT_NONE, EXIT_INVALID, EXIT_UNIMPLEMENTED, EXIT_BUDGET, EXIT_INVARIANT = 0, 1, 2, 3, 4, 5


def _load(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InvalidInstance("file", str(e))
    return from_json(text)


def _print_coloring(c) -> int:
    if c is None:
        print("NO_EXTENSION")
        return EXIT_NONE
    print(json.dumps(coloring_to_json(c), sort_keys=True))
    return EXIT_COLORED


def _jsonl(stream):
    def emit(ev):
        stream.write(json.dumps(ev, sort_keys=True) + "\n")
        stream.flush()
    return emit


def cmd_solve(args, trace_all: bool = False) -> int:
    if args.full:
        p = _load(args.instance)
        solve_full_stub(p.g, p.X0, p.f)
    p = _load(args.instance)
    cfg = SolverConfig(seed_cap=args.seed_cap, member_cap=args.member_cap, jobs=args.jobs)
    if args.trace or trace_all:
        cfg.trace = _jsonl(sys.stderr if not trace_all else sys.stdout)
    if args.dump_cnf:
        out = Path(args.dump_cnf)
        out.mkdir(parents=True, exist_ok=True)
        cfg.dump_cnf = lambda tag, text: (out / f"{tag}.cnf").write_text(text)
    if args.dump_companion:
        dumps = []
        for idx, (q, _) in enumerate(to_orthogonal_collection(p)):
            t = build_companion(q)
            if t is not None:
                dumps.append({"member": idx, **companion_to_json(t)})
        Path(args.dump_companion).write_text(json.dumps(dumps, indent=1, sort_keys=True))
    res = solve_excellent(p, cfg)
    if trace_all:
        print(json.dumps({"stage": "result", "colourable": res.coloring is not None,
                          "certificate": res.certificate}, sort_keys=True))
        return EXIT_COLORED if res.coloring is not None else EXIT_NONE
    return _print_coloring(res.coloring)


def cmd_oracle(args) -> int:
    return _print_coloring(brute_force_extension(_load(args.instance)))


def cmd_validate(args) -> int:
    validate(_load(args.instance))
    print("valid")
    return 0


def cmd_gen(args) -> int:
    prm = GenParams(n=args.n, seed_size=args.seed_size, x_size=args.x_size,
                    ystar_components=args.components, family=args.family,
                    orthogonal=args.orthogonal)
    text = json.dumps(to_json(gen_excellent(prm, args.seed)), sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0


def cmd_check_class(args) -> int:
    try:
        g = parse_edge_list(Path(args.graph).read_text())
    except (OSError, ValueError) as e:
        raise InvalidInstance("file", str(e))
    ok = is_pt_free(g, args.t)
    print(f"P{args.t}-free: {'true' if ok else 'false'}")
    if not ok:
        print("witness: " + " ".join(map(str, find_induced_path(g, args.t))))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="p6color", description="4-precolouring extension for P6-free graphs")
    sub = ap.add_subparsers(dest="command", required=True)

    def solver_opts(sp):
        sp.add_argument("instance")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--seed-cap", type=int, default=12)
        sp.add_argument("--member-cap", type=int, default=10 ** 6)
        sp.add_argument("--dump-companion", metavar="FILE")
        sp.add_argument("--dump-cnf", metavar="DIR")
        sp.add_argument("--full", action="store_true",
                        help="treat the input as a general precolouring (not implemented)")

    sp = sub.add_parser("solve", help="decide and construct an extension")
    solver_opts(sp)
    sp.add_argument("--trace", action="store_true", help="JSON lines per stage on stderr")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("trace", help="solve, printing per-stage JSON lines")
    solver_opts(sp)
    sp.set_defaults(func=lambda a: cmd_solve(a, trace_all=True), trace=False)

    sp = sub.add_parser("oracle", help="brute-force extension")
    sp.add_argument("instance")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("validate", help="check the axioms")
    sp.add_argument("instance")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("gen", help="generate an instance")
    sp.add_argument("--n", type=int, default=14)
    sp.add_argument("--seed-size", type=int, default=4)
    sp.add_argument("--x-size", type=int, default=5)
    sp.add_argument("--components", type=int, default=2)
    sp.add_argument("--family", choices=["random", "structured"], default="random")
    sp.add_argument("--orthogonal", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("check-class", help="test for an induced path")
    sp.add_argument("graph")
    sp.add_argument("--t", type=int, default=6)
    sp.set_defaults(func=cmd_check_class)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidInstance as e:
        print(f"invalid input: axiom {e.axiom}: {e}", file=sys.stderr)
        return EXIT_INVALID
    except RequiresCompanionReduction as e:
        print(f"unimplemented: {e}", file=sys.stderr)
        return EXIT_UNIMPLEMENTED
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantViolation as e:
        print(f"internal invariant failed: {e}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
