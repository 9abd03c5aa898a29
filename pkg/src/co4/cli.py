"""Command line interface.

Exit codes: 0 solved and verified, 1 no solution, 2 error,
3 a solution was found but failed the concrete test.
"""

import argparse
import json
import logging
import sys

from .errors import Co4Error
from .pipeline import ProblemSpec, emit_cnf, run_pipeline

EXIT_OK, EXIT_UNSAT, EXIT_ERROR, EXIT_TEST_FAILED = 0, 1, 2, 3


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _param_text(args):
    if args.param_term is not None:
        return args.param_term
    if args.param is not None:
        return _read(args.param)
    return None


def _add_problem_args(p, alloc=True):
    p.add_argument("program", help="constraint program (.co4)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--param", metavar="FILE", help="file holding the parameter value")
    g.add_argument("--param-term", metavar="TERM", help="parameter value given inline")
    if alloc:
        p.add_argument("--alloc", metavar="SPEC",
                       help="allocator for the unknown, e.g. 'List_Bool{default=4}'")
        p.add_argument("--no-memo", action="store_true", help="disable memoisation of calls")


def build_parser():
    ap = argparse.ArgumentParser(prog="co4", description="Solve constraints written as functional programs.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="compile, solve, decode and test")
    _add_problem_args(s)
    s.add_argument("--solver", metavar="CMD",
                   help="solver command template ({cnf} is the file) or 'internal'; "
                        "default: $CO4_SOLVER, kissat, cadical, or the bundled driver")
    s.add_argument("--emit-cnf", metavar="PATH", help="also write the CNF to PATH")
    s.add_argument("--skip-test", action="store_true", help="do not re-check the solution concretely")
    s.add_argument("--stats", action="store_true", help="print statistics to stderr")
    s.add_argument("--timeout", type=float, help="solver timeout in seconds")

    c = sub.add_parser("compile", help="write the CNF and a variable map")
    _add_problem_args(c)
    c.add_argument("-o", "--output", required=True, metavar="CNF")
    c.add_argument("--map", metavar="JSON", help="where to write the allocator variable map")
    c.add_argument("--stats", action="store_true")

    k = sub.add_parser("check", help="evaluate main on a parameter and a candidate solution")
    _add_problem_args(k, alloc=False)
    g = k.add_mutually_exclusive_group(required=True)
    g.add_argument("--solution", metavar="FILE")
    g.add_argument("--solution-term", metavar="TERM")

    d = sub.add_parser("decode", help="decode a solver model using a variable map")
    d.add_argument("program")
    d.add_argument("--map", required=True, metavar="JSON")
    d.add_argument("--model", required=True, metavar="FILE", help="solver output with v-lines")
    return ap


def _spec(args):
    return ProblemSpec(program=args.program, param=_param_text(args), alloc=args.alloc,
                       solver=getattr(args, "solver", None), emit_cnf=getattr(args, "emit_cnf", None),
                       skip_test=getattr(args, "skip_test", False), memo=not args.no_memo,
                       timeout=getattr(args, "timeout", None))


def _print_stats(stats):
    for k, v in stats.items():
        if isinstance(v, float):
            v = f"{v:.3f}"
        print(f"  {k}: {v}", file=sys.stderr)


def cmd_solve(args):
    res = run_pipeline(_spec(args))
    if args.stats:
        _print_stats(res.stats)
    if res.status == "unsat":
        print("no solution", file=sys.stderr)
        return EXIT_UNSAT
    print(res.solution)
    if res.status == "test-failed":
        print("error: solution failed the concrete test (compiler bug)", file=sys.stderr)
        return EXIT_TEST_FAILED
    return EXIT_OK


def cmd_compile(args):
    res = emit_cnf(_spec(args), args.output, args.map)
    logging.getLogger("co4").info("CNF finished (#variables: %d, #clauses: %d)",
                                  res.problem.num_vars, res.problem.num_clauses)
    if args.stats:
        _print_stats(res.stats)
    return EXIT_OK


def cmd_check(args):
    from .concrete_eval import check_solution
    from .domain import check_value
    from .frontend import compile_file
    from .values import parse_value

    core = compile_file(args.program)
    ktype, utype = core.main_function.param_types
    param = check_value(core.types, ktype, parse_value(_param_text(args)))
    text = args.solution_term if args.solution_term is not None else _read(args.solution)
    sol = check_value(core.types, utype, parse_value(text))
    ok = check_solution(core, param, sol)
    print(f"Test: {ok}")
    return EXIT_OK if ok else EXIT_TEST_FAILED


def cmd_decode(args):
    from .domain import AbstractStore
    from .formula import TRUE, Assignment, Circuit
    from .frontend import compile_file
    from .sat.external import parse_solver_output

    core = compile_file(args.program)
    vmap = json.loads(_read(args.map))
    sat, lits = parse_solver_output(_read(args.model))
    if not sat:
        print("model file reports UNSATISFIABLE", file=sys.stderr)
        return EXIT_UNSAT
    circuit = Circuit()
    store = AbstractStore(circuit, core.types)
    top = max([abs(l) for l in lits] + [0])

    def build(node):
        return store.make(node["flags"], [build(x) for x in node["args"]], TRUE)

    a = build(vmap["allocator"])
    circuit.fresh(max(top, max(_all_flags(vmap["allocator"]) + [0])))
    print(store.decode(vmap["type"], a, Assignment.from_literals(lits)))
    return EXIT_OK


def _all_flags(node):
    out = list(node["flags"])
    for x in node["args"]:
        out.extend(_all_flags(x))
    return out


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.INFO if getattr(args, "stats", False) else logging.WARNING
    logging.basicConfig(level=level, format="%(message)s", stream=sys.stderr, force=True)
    handlers = {"solve": cmd_solve, "compile": cmd_compile, "check": cmd_check, "decode": cmd_decode}
    try:
        return handlers[args.command](args)
    except Co4Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
