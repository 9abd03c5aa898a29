"""Type checking of the monomorphic first-order core.

The front end already infers types; this pass re-checks the result so
that later stages can rely on every ``Con``/``Case`` carrying the right
type name and every call matching its callee.
"""

from ..errors import TypeCheckError
from .syntax import Call, Case, Con, Let, Var


def typecheck(core):
    """Check ``core``; return a dict mapping ``id(expr)`` to its type name."""
    owner = {}
    for t in core.types.values():
        for c in t.constructors:
            owner.setdefault(c.name, set()).add(t.name)
    types = {}

    def err(msg, loc):
        return TypeCheckError(msg, loc, core.path)

    def go(e, env):
        if isinstance(e, Var):
            if e.name not in env:
                raise err(f"unbound variable {e.name}", e.loc)
            t = env[e.name]
        elif isinstance(e, Con):
            dt = core.types.get(e.type)
            c = dt.constructor(e.con) if dt else None
            if c is None:
                raise err(f"constructor {e.con} does not belong to {e.type}", e.loc)
            if len(e.args) != c.arity:
                raise err(f"constructor {e.con} expects {c.arity} argument(s)", e.loc)
            for a, ft in zip(e.args, c.fields):
                at = go(a, env)
                if at != ft:
                    raise err(f"type mismatch: expected {ft}, found {at}", a.loc or e.loc)
            t = e.type
        elif isinstance(e, Call):
            f = core.functions.get(e.func)
            if f is None:
                raise err(f"unknown function {e.func}", e.loc)
            if len(e.args) != len(f.params):
                raise err(f"{e.func} expects {len(f.params)} argument(s)", e.loc)
            for a, pt in zip(e.args, f.param_types):
                at = go(a, env)
                if at != pt:
                    raise err(f"type mismatch: expected {pt}, found {at}", a.loc or e.loc)
            t = f.result_type
        elif isinstance(e, Let):
            bt = go(e.bound, env)
            t = go(e.body, {**env, e.name: bt})
        elif isinstance(e, Case):
            st = go(e.scrut, env)
            dt = core.types.get(e.type)
            if st != e.type or dt is None:
                raise err(f"type mismatch in case: expected {e.type}, found {st}", e.loc)
            if [b.con for b in e.branches] != [c.name for c in dt.constructors]:
                raise err("case branches must list every constructor in declaration order", e.loc)
            t = None
            for b, c in zip(e.branches, dt.constructors):
                if len(b.vars) != c.arity:
                    raise err(f"branch {b.con} binds {len(b.vars)} variable(s), expected {c.arity}", e.loc)
                bt = go(b.body, {**env, **dict(zip(b.vars, c.fields))})
                if t is None:
                    t = bt
                elif bt != t:
                    raise err(f"case branches disagree: {t} vs {bt}", e.loc)
        else:
            raise TypeError(f"unexpected node {e!r}")
        types[id(e)] = t
        return t

    for f in core.functions.values():
        rt = go(f.body, dict(zip(f.params, f.param_types)))
        if rt != f.result_type:
            raise err(f"{f.name} returns {rt} but is declared to return {f.result_type}", f.loc)
    main = core.main_function
    if len(main.params) != 2 or main.result_type != "Bool":
        raise err("main must have type Known -> Unknown -> Bool", main.loc)
    return types
