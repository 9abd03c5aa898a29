"""Strict reference interpreter.

Works on core programs and on surface programs (nested patterns,
functional arguments), so the front-end passes can be checked against
it.  Everything is strict: a ⊥ argument to a constructor or function,
a ⊥ let-bound value or a ⊥ discriminant makes the result ⊥.  Partial
values such as ``S ⊥`` only arise from inputs.
"""

from .errors import EvaluationError, StepLimitExceeded
from .frontend.syntax import (
    Call, Case, Con, FunRef, Let, Match, PCon, PVar, PWild, Var,
)
from .values import BOTTOM, FunRefValue, Value

DEFAULT_STEP_LIMIT = 10**7


class _NoMatch(Exception):
    pass


class _Diverge(Exception):
    # pattern matching forced a ⊥
    pass


class Interpreter:
    def __init__(self, functions, step_limit=DEFAULT_STEP_LIMIT):
        self.functions = functions
        self.step_limit = step_limit
        self.steps = 0

    def tick(self):
        self.steps += 1
        if self.steps > self.step_limit:
            raise StepLimitExceeded(f"evaluation exceeded {self.step_limit} steps")

    def eval(self, e, env):
        self.tick()
        if isinstance(e, Var):
            try:
                return env[e.name]
            except KeyError:
                raise EvaluationError(f"unbound variable {e.name}") from None
        if isinstance(e, FunRef):
            return FunRefValue(e.name)
        if isinstance(e, Con):
            args = []
            for x in e.args:
                v = self.eval(x, env)
                if v is BOTTOM:
                    return BOTTOM
                args.append(v)
            return Value(e.con, tuple(args))
        if isinstance(e, Call):
            args = []
            for x in e.args:
                v = self.eval(x, env)
                if v is BOTTOM:
                    return BOTTOM
                args.append(v)
            fname = e.func
            if fname in env:
                ref = env[fname]
                if not isinstance(ref, FunRefValue):
                    raise EvaluationError(f"{fname} is not a function")
                fname = ref.name
            return self.apply(fname, args)
        if isinstance(e, Let):
            v = self.eval(e.bound, env)
            if v is BOTTOM:
                return BOTTOM
            return self.eval(e.body, {**env, e.name: v})
        if isinstance(e, Case):
            v = self.eval(e.scrut, env)
            if v is BOTTOM:
                return BOTTOM
            for b in e.branches:
                if b.con == v.con:
                    if len(b.vars) != len(v.args):
                        raise EvaluationError(f"arity mismatch in branch {b.con}")
                    return self.eval(b.body, {**env, **dict(zip(b.vars, v.args))})
            raise EvaluationError(f"no branch for constructor {v.con}")
        if isinstance(e, Match):
            v = self.eval(e.scrut, env)
            if v is BOTTOM:
                return BOTTOM
            for p, body in e.alts:
                binds = {}
                try:
                    self.match(p, v, binds)
                except _NoMatch:
                    continue
                except _Diverge:
                    return BOTTOM
                return self.eval(body, {**env, **binds})
            raise EvaluationError(f"pattern match failure on {v}")
        raise EvaluationError(f"unexpected expression {type(e).__name__}")

    def match(self, p, v, binds):
        if isinstance(p, PWild):
            return
        if isinstance(p, PVar):
            binds[p.name] = v
            return
        if isinstance(p, PCon):
            if v is BOTTOM:
                raise _Diverge()
            if v.con != p.con:
                raise _NoMatch()
            for q, x in zip(p.args, v.args):
                self.match(q, x, binds)
            return
        raise EvaluationError(f"bad pattern {p!r}")

    def apply(self, fname, args):
        f = self.functions.get(fname)
        if f is None:
            raise EvaluationError(f"unknown function {fname}")
        if len(args) != len(f.params):
            raise EvaluationError(f"{fname} expects {len(f.params)} argument(s)")
        if any(a is BOTTOM for a in args):
            return BOTTOM
        return self.eval(f.body, dict(zip(f.params, args)))


def concrete_eval(program, expr, env, step_limit=DEFAULT_STEP_LIMIT):
    """Evaluate ``expr`` under ``env`` in the context of ``program``'s functions."""
    from .abstract_eval import deep_call

    it = Interpreter(program.functions, step_limit)
    return deep_call(lambda: it.eval(expr, env))


def run_main(program, param, solution, step_limit=DEFAULT_STEP_LIMIT):
    """Value of ``main param solution``."""
    from .abstract_eval import deep_call

    main = program.functions["main"]
    it = Interpreter(program.functions, step_limit)
    return deep_call(lambda: it.apply(main.name, [param, solution]))


def check_solution(program, param, solution, step_limit=DEFAULT_STEP_LIMIT):
    """True iff ``main param solution`` evaluates to True."""
    return run_main(program, param, solution, step_limit) == Value("True")
