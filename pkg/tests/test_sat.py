import itertools
import random
import shlex
import sys

import pytest

from co4.errors import SolverError
from co4.formula import Assignment
from co4.sat import CnfProblem, check_model, dimacs_text, read_dimacs, solve_external, solve_internal
from co4.sat.external import build_argv, parse_solver_output

PY = shlex.quote(sys.executable)
DRIVER = f"{PY} -m co4.sat.driver {{cnf}}"


def brute_force(clauses, n):
    for bits in itertools.product((False, True), repeat=n):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def pigeonhole(holes):
    pigeons = holes + 1
    var = lambda p, h: p * holes + h + 1
    clauses = [[var(p, h) for h in range(holes)] for p in range(pigeons)]
    for h in range(holes):
        for p, q in itertools.combinations(range(pigeons), 2):
            clauses.append([-var(p, h), -var(q, h)])
    return CnfProblem.from_clauses(clauses, pigeons * holes)


def test_dimacs_writer():
    p = CnfProblem.from_clauses([[1, -2], [2, 3], [-1]], 3)
    assert dimacs_text(p) == "p cnf 3 3\n1 -2 0\n2 3 0\n-1 0\n"
    assert dimacs_text(CnfProblem.from_clauses([], 0)) == "p cnf 0 0\n"


def test_dimacs_round_trip():
    rng = random.Random(1)
    clauses = [[rng.choice((-1, 1)) * rng.randint(1, 30) for _ in range(rng.randint(1, 5))]
               for _ in range(100)]
    p = CnfProblem.from_clauses(clauses, 30)
    q = read_dimacs("c comment\n" + dimacs_text(p))
    assert list(q.clauses()) == list(p.clauses()) == clauses
    assert (q.num_vars, q.num_clauses) == (30, 100)


def test_check_model():
    p = CnfProblem.from_clauses([[1, -2], [2]], 2)
    assert check_model(p, Assignment({1: True, 2: True}))
    assert not check_model(p, Assignment({2: True}))  # missing variables are false
    assert not check_model(CnfProblem.from_clauses([[]], 0), Assignment({}))


@pytest.mark.parametrize("mode", ["exhaustive", "dpll", "auto"])
def test_internal_solvers(mode):
    assert not solve_internal(pigeonhole(3), mode).satisfiable
    r = solve_internal(CnfProblem.from_clauses([[1, 2], [-1], [3, -2]], 3), mode)
    assert r.satisfiable and r.assignment[2] and not r.assignment[1] and r.assignment[3]
    assert solve_internal(CnfProblem.from_clauses([], 0), mode).satisfiable


def test_random_instances_against_enumeration():
    rng = random.Random(5)
    for _ in range(40):
        n = 10
        clauses = [[rng.choice((-1, 1)) * rng.randint(1, n) for _ in range(3)] for _ in range(rng.randint(20, 60))]
        p = CnfProblem.from_clauses(clauses, n)
        expected = brute_force(clauses, n)
        for mode in ("exhaustive", "dpll"):
            r = solve_internal(p, mode)
            assert r.satisfiable == expected
            if r.satisfiable:
                assert check_model(p, r.assignment)


def test_dpll_beyond_exhaustive_limit():
    rng = random.Random(9)
    n = 60
    planted = [rng.random() < 0.5 for _ in range(n)]
    clauses = []
    while len(clauses) < 200:
        c = [rng.choice((-1, 1)) * rng.randint(1, n) for _ in range(3)]
        if any(planted[abs(l) - 1] == (l > 0) for l in c):
            clauses.append(c)
    p = CnfProblem.from_clauses(clauses, n)
    r = solve_internal(p)
    assert r.satisfiable and check_model(p, r.assignment)
    assert not solve_internal(pigeonhole(5)).satisfiable


def test_external_agrees_with_internal():
    rng = random.Random(11)
    for _ in range(5):
        clauses = [[rng.choice((-1, 1)) * rng.randint(1, 8) for _ in range(3)] for _ in range(rng.randint(20, 45))]
        p = CnfProblem.from_clauses(clauses, 8)
        ext = solve_external(p, DRIVER)
        assert ext.satisfiable == solve_internal(p).satisfiable
        if ext.satisfiable:
            assert check_model(p, ext.assignment)
    assert solve_external(pigeonhole(4), DRIVER).status == "UNSAT"


def test_external_empty_formula():
    r = solve_external(CnfProblem.from_clauses([], 0), DRIVER)
    assert r.satisfiable


def test_garbage_output():
    cmd = f"{PY} -c \"print('hello')\""
    with pytest.raises(SolverError):
        solve_external(CnfProblem.from_clauses([[1]], 1), cmd)
    with pytest.raises(SolverError):
        parse_solver_output("s MAYBE\n")
    with pytest.raises(SolverError):
        parse_solver_output("s SATISFIABLE\nv 1 x 0\n")


def test_wrong_model_is_rejected():
    cmd = f"{PY} -c \"print('s SATISFIABLE'); print('v -1 0')\""
    with pytest.raises(SolverError, match="violates"):
        solve_external(CnfProblem.from_clauses([[1]], 1), cmd)


def test_missing_solver():
    with pytest.raises(SolverError, match="not found"):
        solve_external(CnfProblem.from_clauses([[1]], 1), "no-such-solver-binary {cnf}")


def test_solver_output_parsing():
    sat, lits = parse_solver_output("c hi\ns SATISFIABLE\nv 1 -2\nv 3 0\n")
    assert sat and lits == [1, -2, 3, 0]
    assert parse_solver_output("s UNSATISFIABLE\n") == (False, [])
    assert build_argv("solver --x {cnf}", "/f.cnf") == ["solver", "--x", "/f.cnf"]
    assert build_argv("solver", "/f.cnf") == ["solver", "/f.cnf"]
