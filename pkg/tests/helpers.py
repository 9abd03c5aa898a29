"""Brute-force oracles shared by the tests."""

import itertools
from pathlib import Path

import co4
from co4.abstract_eval import AbstractEvaluator
from co4.concrete_eval import Interpreter
from co4.domain import AbstractStore, decode, unknown_variables
from co4.formula import Assignment, Circuit
from co4.frontend import compile_program

PROGRAMS = Path(co4.__file__).parent / "programs"


def program_text(name):
    return (PROGRAMS / name).read_text()


def load(name):
    return compile_program(program_text(name), name)


def all_assignments(variables):
    variables = sorted(variables)
    for bits in itertools.product((False, True), repeat=len(variables)):
        yield Assignment(dict(zip(variables, bits)))


class Setup:
    """A circuit and store over a core program's types."""

    def __init__(self, core, memo=True):
        self.core = core
        self.circuit = Circuit()
        self.store = AbstractStore(self.circuit, core.types)
        self.evaluator = AbstractEvaluator(core, self.store, memo=memo)

    def decode(self, tname, a, sigma, cache=None):
        return decode(self.core.types, self.circuit, tname, a, sigma, cache)


def agreement_check(setup, fname, args, max_vars=16):
    """Compare abstract and concrete evaluation of ``fname`` on every assignment.

    Returns (number of assignments, list of mismatches).
    """
    core = setup.core
    f = core.functions[fname]
    variables = set()
    for a in args:
        variables |= unknown_variables(setup.circuit, a)
    assert len(variables) <= max_vars, len(variables)
    result = setup.evaluator.call(fname, list(args))
    interp = Interpreter(core.functions)
    bad = []
    n = 0
    for sigma in all_assignments(variables):
        cache = {}
        inputs = [setup.decode(t, a, sigma, cache) for t, a in zip(f.param_types, args)]
        expected = interp.apply(fname, inputs)
        got = setup.decode(f.result_type, result, sigma, cache)
        n += 1
        if got != expected:
            bad.append((inputs, expected, got))
    return n, bad
