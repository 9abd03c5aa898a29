"""The solve pipeline: compile, evaluate abstractly, solve, decode, test."""

import json
import logging
import re
import time
from dataclasses import dataclass, field

from .abstract_eval import DEFAULT_NODE_LIMIT, evaluate_main
from .concrete_eval import DEFAULT_STEP_LIMIT, check_solution
from .domain import AbstractStore, type_sccs
from .errors import AllocatorError, Co4Error, PipelineError, ValueTypeError
from .formula import FALSE, Circuit, CnfBuilder
from .frontend import compile_file, compile_program
from .sat import CnfProblem, solve_external, solve_internal, write_dimacs
from .values import is_total, parse_value

log = logging.getLogger("co4")

_ALLOC = re.compile(r"^\s*(?P<type>[A-Za-z][A-Za-z0-9_']*)?\s*(?:\{(?P<body>[^}]*)\})?\s*$")


def parse_alloc_spec(text):
    """Parse ``Type{default=K, Other=K2}`` into (type name or None, bounds or None).

    ``Type{K}`` is short for ``Type{default=K}``; a bare integer means a
    default bound for an allocator of main's unknown type.
    """
    text = text.strip()
    if re.fullmatch(r"\d+", text):
        return None, {"default": int(text)}
    m = _ALLOC.match(text)
    if not m or not text:
        raise AllocatorError(f"malformed allocator specification {text!r}")
    tname, body = m.group("type"), m.group("body")
    if body is None:
        return tname, None
    bounds = {}
    for part in filter(None, (p.strip() for p in body.split(","))):
        if "=" in part:
            k, v = (s.strip() for s in part.split("=", 1))
        else:
            k, v = "default", part
        if not re.fullmatch(r"\d+", v) or not k:
            raise AllocatorError(f"malformed bound {part!r} in allocator specification")
        if k in bounds:
            raise AllocatorError(f"bound for {k} given twice")
        bounds[k] = int(v)
    return tname, bounds


@dataclass
class ProblemSpec:
    program: str = None          # path to a .co4 file
    source: str = None           # program text (instead of a path)
    param: str = None            # parameter value as term text
    alloc: str = None            # allocator specification
    solver: str = None           # 'internal', a command template, or None for the default
    emit_cnf: str = None
    skip_test: bool = False
    memo: bool = True
    node_limit: int = DEFAULT_NODE_LIMIT
    step_limit: int = DEFAULT_STEP_LIMIT
    timeout: float = None


@dataclass
class PipelineResult:
    status: str                   # 'solved', 'unsat', 'test-failed', 'compiled'
    solution: object = None
    test: bool = None
    stats: dict = field(default_factory=dict)
    problem: CnfProblem = None
    core: object = None

    @property
    def exit_code(self):
        return {"solved": 0, "compiled": 0, "unsat": 1, "test-failed": 3}[self.status]


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except PipelineError:
        raise
    except Co4Error as exc:
        raise PipelineError(name, exc) from exc


def load_program(spec):
    if spec.source is not None:
        return compile_program(spec.source, spec.program)
    if spec.program is None:
        raise Co4Error("no program given")
    return compile_file(spec.program)


def _check_type(core, tname, expected, what):
    if tname is not None and tname != expected:
        raise ValueTypeError(f"{what} has type {expected}, not {tname}")


def build_constraint(spec, core=None):
    """Stages one and two: compile and evaluate abstractly.

    Returns a dict with the core program, circuit, store, allocator,
    goal formula and statistics.
    """
    stats = {}
    t0 = time.perf_counter()
    if core is None:
        core = _stage("compile", load_program, spec)
    main = core.main_function
    ktype, utype = main.param_types
    stats["compile_seconds"] = time.perf_counter() - t0

    def prepare():
        from .domain import check_value

        if spec.param is None:
            raise ValueTypeError("no parameter value given")
        param = parse_value(spec.param)
        check_value(core.types, ktype, param)
        atype, bounds = parse_alloc_spec(spec.alloc) if spec.alloc else (None, None)
        _check_type(core, atype, utype, "the unknown")
        return param, bounds

    param, bounds = _stage("input", prepare)

    circuit = Circuit()
    store = AbstractStore(circuit, core.types)

    def allocate():
        p = store.encode(ktype, param)
        if bounds is None:
            if any(type_sccs(core.types)[t][1] for t in _reachable(core.types, utype)):
                raise AllocatorError(f"type {utype} is recursive; give a size bound, e.g. {utype}{{default=3}}")
            u = store.complete_allocator(utype)
        else:
            u = store.bounded_allocator(utype, bounds)
        return p, u

    pa, ua = _stage("allocate", allocate)
    stats["allocator_variables"] = circuit.num_vars
    t1 = time.perf_counter()
    result, ev = _stage("abstract evaluation", evaluate_main, core, store, pa, ua,
                        memo=spec.memo, node_limit=spec.node_limit)
    stats["abstract_seconds"] = time.perf_counter() - t1
    # the top-level value must be defined and True, and the unknown total
    truth = result.flags[0] if result.flags else FALSE
    goal = circuit.mk_and([truth, result.defined, store.totality(ua, utype)])
    stats.update(ev.stats.as_dict())
    stats["formula_nodes"] = circuit.num_nodes
    stats["gates"] = circuit.num_gates
    stats["gates_built"] = circuit.gates_built
    stats["abstract_values"] = len(store)
    return {"core": core, "circuit": circuit, "store": store, "param": param, "unknown": ua,
            "utype": utype, "goal": goal, "stats": stats}


def _reachable(types, t):
    seen, stack = set(), [t]
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        for c in types[x].constructors:
            stack.extend(c.fields)
    return seen


def to_cnf(built):
    t0 = time.perf_counter()
    builder = CnfBuilder(built["circuit"])
    builder.assert_formula(built["goal"])
    problem = CnfProblem.from_builder(builder)
    built["stats"]["cnf_seconds"] = time.perf_counter() - t0
    built["stats"]["variables"] = problem.num_vars
    built["stats"]["clauses"] = problem.num_clauses
    return problem


def variable_map(built):
    """JSON-ready description of the unknown's allocator (flag variables per node)."""
    def node(a):
        return {"flags": list(a.flags), "args": [node(x) for x in a.args]}

    return {"type": built["utype"], "allocator": node(built["unknown"])}


def emit_cnf(spec, cnf_path, map_path=None, core=None):
    """Compile to CNF and write it, plus the allocator variable map."""
    built = build_constraint(spec, core)
    problem = to_cnf(built)
    with open(cnf_path, "w") as fh:
        write_dimacs(problem, fh)
    if map_path:
        with open(map_path, "w") as fh:
            json.dump(variable_map(built), fh)
    return PipelineResult("compiled", stats=built["stats"], problem=problem, core=built["core"])


def run_pipeline(spec, core=None):
    """Run every stage; returns a :class:`PipelineResult`."""
    built = build_constraint(spec, core)
    stats = built["stats"]
    problem = to_cnf(built)
    log.info("CNF finished (#variables: %d, #clauses: %d)", problem.num_vars, problem.num_clauses)
    if spec.emit_cnf:
        with open(spec.emit_cnf, "w") as fh:
            write_dimacs(problem, fh)

    def solve():
        if spec.solver == "internal":
            return solve_internal(problem)
        return solve_external(problem, spec.solver, timeout=spec.timeout)

    res = _stage("solve", solve)
    stats["solver"] = res.solver
    stats["solve_seconds"] = res.seconds
    log.info("Solver finished in %f seconds (result: %s)", res.seconds, res.satisfiable)
    if not res.satisfiable:
        return PipelineResult("unsat", stats=stats, problem=problem, core=built["core"])
    store = built["store"]
    solution = store.decode(built["utype"], built["unknown"], res.assignment)
    if not is_total(solution):
        raise PipelineError("decode", Co4Error(f"decoded solution contains ⊥: {solution}"))
    log.info("Solution: %s", solution)
    result = PipelineResult("solved", solution, stats=stats, problem=problem, core=built["core"])
    if spec.skip_test:
        return result
    ok = _stage("test", check_solution, built["core"], built["param"], solution, spec.step_limit)
    log.info("Test: %s", ok)
    result.test = ok
    if not ok:
        result.status = "test-failed"
    return result
