"""Monomorphisation and higher-order elimination by specialisation.

Starting from ``main``, every reachable combination of (function, type
arguments, functional arguments) becomes its own first-order function.
Functional arguments must be names of top-level first-order functions;
partial application, lambdas and functions stored in data are rejected.
Polymorphic data types are instantiated per use (``List Bool`` becomes
``List_Bool``).

Type signatures are mandatory for top-level functions; bodies are
checked by unification against them.
"""

from ..errors import InstantiationError, TypeCheckError
from .syntax import (
    Branch, Call, Case, Con, Constructor, CoreProgram, DataType, Function,
    FunRef, Let, TCon, TFun, TVar, Var, split_fun, type_vars,
)

DEFAULT_MAX_SPECIALIZATIONS = 100


class UVar:
    __slots__ = ("ref", "id")
    _n = 0

    def __init__(self):
        UVar._n += 1
        self.id = UVar._n
        self.ref = None

    def __repr__(self):
        return f"?{self.id}"


def prune(t):
    while isinstance(t, UVar) and t.ref is not None:
        t = t.ref
    return t


def show_type(t):
    t = prune(t)
    if isinstance(t, UVar):
        return f"t{t.id}"
    if isinstance(t, TCon):
        if not t.args:
            return t.name
        parts = [t.name]
        for a in t.args:
            s = show_type(a)
            parts.append(f"({s})" if " " in s else s)
        return " ".join(parts)
    if isinstance(t, TFun):
        a = show_type(t.arg)
        if isinstance(prune(t.arg), TFun):
            a = f"({a})"
        return f"{a} -> {show_type(t.res)}"
    return str(t)


def subst(t, env):
    if isinstance(t, TVar):
        return env[t.name]
    if isinstance(t, TCon):
        return TCon(t.name, tuple(subst(a, env) for a in t.args)) if t.args else t
    if isinstance(t, TFun):
        return TFun(subst(t.arg, env), subst(t.res, env))
    return t


def occurs(u, t):
    t = prune(t)
    if t is u:
        return True
    if isinstance(t, TCon):
        return any(occurs(u, a) for a in t.args)
    if isinstance(t, TFun):
        return occurs(u, t.arg) or occurs(u, t.res)
    return False


def mono_name(t):
    if not t.args:
        return t.name
    return t.name + "_" + "_".join(mono_name(a) for a in t.args)


def has_fun(t):
    t = prune(t)
    if isinstance(t, TFun):
        return True
    if isinstance(t, TCon):
        return any(has_fun(a) for a in t.args)
    return False


class Instantiator:
    def __init__(self, program, max_specializations=DEFAULT_MAX_SPECIALIZATIONS):
        self.program = program
        self.path = program.path
        self.max_specs = max_specializations
        self.owner = program.constructor_owner()
        self.types = {}
        self._type_origin = {}
        self.functions = {}
        self._spec_names = {}
        self._spec_count = {}
        self._queue = []
        self.sigs = {}
        self._check_datas()
        for f in program.functions.values():
            if f.sig is None:
                raise TypeCheckError(f"missing type signature for {f.name}", f.loc, self.path)
            self.sigs[f.name] = self.expand(f.sig, f.loc)
            params, res = split_fun(self.sigs[f.name], len(f.params))
            if params is None:
                raise self.err(f"{f.name} has more parameters than its type signature allows", f.loc)
            if has_fun(res):
                raise self.err(f"{f.name} returns a function; function results are not supported "
                               "(first-order semantics)", f.loc, InstantiationError)

    def err(self, msg, loc=None, cls=TypeCheckError):
        return cls(msg, loc, self.path)

    # -- type declarations ------------------------------------------------

    def expand(self, t, loc, depth=0):
        """Expand synonyms and check type constructor arities."""
        if depth > 100:
            raise self.err("cyclic type synonym", loc)
        if isinstance(t, TVar):
            return t
        if isinstance(t, TFun):
            return TFun(self.expand(t.arg, loc, depth), self.expand(t.res, loc, depth))
        args = tuple(self.expand(a, loc, depth) for a in t.args)
        syn = self.program.synonyms.get(t.name)
        if syn is not None:
            if len(args) != len(syn.params):
                raise self.err(f"type synonym {t.name} expects {len(syn.params)} argument(s)", loc)
            body = subst(syn.rhs, dict(zip(syn.params, args)))
            return self.expand(body, loc, depth + 1)
        decl = self.program.datas.get(t.name)
        if decl is None:
            raise self.err(f"unknown type {t.name}", loc)
        if len(args) != len(decl.params):
            raise self.err(f"type {t.name} expects {len(decl.params)} argument(s), got {len(args)}", loc)
        return TCon(t.name, args)

    def _check_datas(self):
        for d in self.program.datas.values():
            for c in d.constructors:
                fields = []
                for f in c.fields:
                    ft = self.expand(f, c.loc)
                    if has_fun(ft):
                        raise self.err(
                            f"constructor {c.name} has a functional field; functions cannot be stored in data "
                            "(first-order semantics)", c.loc, InstantiationError)
                    for v in type_vars(ft):
                        if v not in d.params:
                            raise self.err(f"type variable {v} not bound in declaration of {d.name}", c.loc)
                    fields.append(ft)
                c.expanded = fields

    def core_type(self, t, loc=None):
        name = mono_name(t)
        origin = self._type_origin.get(name)
        if origin is not None:
            if origin != t:
                raise self.err(f"instantiated type name {name} clashes with another type", loc, InstantiationError)
            return name
        self._type_origin[name] = t
        decl = self.program.datas[t.name]
        env = dict(zip(decl.params, t.args))
        cons = []
        for i, c in enumerate(decl.constructors):
            fields = tuple(self.core_type(subst(f, env), loc) for f in c.expanded)
            cons.append(Constructor(c.name, fields, i))
        self.types[name] = DataType(name, tuple(cons))
        return name

    # -- specialisation requests ----------------------------------------------

    def request(self, fname, targs, fargs, loc=None):
        key = (fname, targs, fargs)
        name = self._spec_names.get(key)
        if name is not None:
            return name
        n = self._spec_count.get(fname, 0) + 1
        if n > self.max_specs:
            raise self.err(
                f"instantiation bound exceeded: more than {self.max_specs} specialisations of {fname} "
                "(polymorphic recursion?)", loc, InstantiationError)
        self._spec_count[fname] = n
        parts = [fname]
        parts += [mono_name(t) for t in targs]
        parts += [self.request(h, htargs, (), loc) for h, htargs in fargs]
        name = "_".join(parts)
        base, k = name, 1
        while name in self.functions or name in self._spec_names.values():
            k += 1
            name = f"{base}_{k}"
        self._spec_names[key] = name
        self.functions[name] = None  # reserve
        self._queue.append((name, fname, targs, fargs, loc))
        return name

    def run(self):
        main = self.program.functions["main"]
        sig = self.sigs["main"]
        if type_vars(sig):
            raise self.err("main must be monomorphic", main.loc)
        params, res = split_fun(sig, len(main.params))
        if len(main.params) != 2 or params is None:
            raise self.err("main must take exactly two parameters (known, unknown)", main.loc)
        if res != TCon("Bool"):
            raise self.err("main must return Bool", main.loc)
        if any(has_fun(p) for p in params):
            raise self.err("main cannot take functional parameters", main.loc)
        self.core_type(TCon("Bool"))
        self.request("main", (), ())
        while self._queue:
            self.specialize(*self._queue.pop(0))
        return CoreProgram(self.types, self.functions, "main", self.path)

    def fun_inst_type(self, fname, targs):
        f = self.program.functions[fname]
        tvars = type_vars(self.sigs[fname])
        return subst(self.sigs[fname], dict(zip(tvars, targs))), f

    def specialize(self, name, fname, targs, fargs, loc):
        f = self.program.functions[fname]
        sig = self.sigs[fname]
        tvars = type_vars(sig)
        theta = dict(zip(tvars, targs))
        params, res = split_fun(subst(sig, theta), len(f.params))
        if params is None:
            raise self.err(f"{fname} has more parameters than its type signature allows", f.loc)
        if has_fun(res):
            raise self.err(f"{fname} returns a function; function results are not supported "
                           "(first-order semantics)", f.loc, InstantiationError)
        env, fenv = {}, {}
        fargs_iter = iter(fargs)
        core_params, core_types = [], []
        for p, pt in zip(f.params, params):
            if isinstance(pt, TFun):
                h, htargs = next(fargs_iter)
                fenv[p] = (h, htargs, self.fun_inst_type(h, htargs)[0])
            else:
                if has_fun(pt):
                    raise self.err(f"parameter {p} of {fname} has a type containing functions", f.loc,
                                   InstantiationError)
                env[p] = pt
                core_params.append(p)
                core_types.append(self.core_type(pt, f.loc))
        info = {}
        t = self.infer(f.body, env, fenv, info)
        self.unify(t, res, f.body.loc or f.loc)
        body = self.rewrite(f.body, fenv, info)
        self.functions[name] = Function(name, core_params, core_types, self.core_type(res, f.loc), body, f.loc)

    # -- inference ------------------------------------------------------------------

    def unify(self, a, b, loc):
        a, b = prune(a), prune(b)
        if a is b:
            return
        if isinstance(a, UVar):
            if occurs(a, b):
                raise self.err(f"infinite type {show_type(a)} ~ {show_type(b)}", loc)
            a.ref = b
            return
        if isinstance(b, UVar):
            self.unify(b, a, loc)
            return
        if isinstance(a, TCon) and isinstance(b, TCon) and a.name == b.name and len(a.args) == len(b.args):
            for x, y in zip(a.args, b.args):
                self.unify(x, y, loc)
            return
        if isinstance(a, TFun) and isinstance(b, TFun):
            self.unify(a.arg, b.arg, loc)
            self.unify(a.res, b.res, loc)
            return
        raise self.err(f"type mismatch: expected {show_type(b)}, found {show_type(a)}", loc)

    def fresh_sig(self, fname):
        sig = self.sigs[fname]
        uvars = tuple(UVar() for _ in type_vars(sig))
        return subst(sig, dict(zip(type_vars(sig), uvars))), uvars

    def infer(self, e, env, fenv, info):
        if isinstance(e, Var):
            if e.name in fenv:
                raise self.err(f"functional parameter {e.name} used as a value", e.loc, InstantiationError)
            return env[e.name]
        if isinstance(e, FunRef):
            raise self.err(f"function {e.name} used as a value; functions may only be passed "
                           "directly as arguments", e.loc, InstantiationError)
        if isinstance(e, Con):
            decl = self.owner[e.con]
            c = next(c for c in decl.constructors if c.name == e.con)
            if len(e.args) != len(c.fields):
                raise self.err(f"constructor {e.con} expects {len(c.fields)} argument(s), got {len(e.args)}", e.loc)
            uvars = tuple(UVar() for _ in decl.params)
            tenv = dict(zip(decl.params, uvars))
            for a, ft in zip(e.args, c.expanded):
                self.unify(self.infer(a, env, fenv, info), subst(ft, tenv), a.loc or e.loc)
            t = TCon(decl.name, uvars)
            info[id(e)] = t
            return t
        if isinstance(e, Call):
            if e.func in fenv:
                h, htargs, ht = fenv[e.func]
                ptypes, rt = split_fun(ht, len(e.args))
                if ptypes is None or isinstance(rt, TFun):
                    raise self.err(f"{e.func} must be applied to all of its arguments", e.loc, InstantiationError)
                for a, pt in zip(e.args, ptypes):
                    self.unify(self.infer(a, env, fenv, info), pt, a.loc or e.loc)
                return rt
            g = self.program.functions.get(e.func)
            if g is None:
                raise self.err(f"{e.func} is not a function", e.loc)
            if len(e.args) != len(g.params):
                raise self.err(f"{e.func} expects {len(g.params)} argument(s), got {len(e.args)} "
                               "(partial application is not supported)", e.loc, InstantiationError)
            sig, uvars = self.fresh_sig(e.func)
            ptypes, rt = split_fun(sig, len(g.params))
            fargs = []
            for a, pt in zip(e.args, ptypes):
                if isinstance(prune(pt), TFun):
                    if isinstance(a, FunRef):
                        h = self.program.functions[a.name]
                        hsig, huvars = self.fresh_sig(a.name)
                        hp, _ = split_fun(hsig, len(h.params))
                        if hp is None or any(has_fun(x) for x in hp):
                            raise self.err(f"{a.name} cannot be passed as an argument: it is not a first-order "
                                           "function", a.loc, InstantiationError)
                        self.unify(hsig, pt, a.loc)
                        fargs.append(("ref", a.name, huvars))
                    elif isinstance(a, Var) and a.name in fenv:
                        self.unify(fenv[a.name][2], pt, a.loc)
                        fargs.append(("param", fenv[a.name]))
                    else:
                        raise self.err(f"argument of {e.func} must be the name of a top-level function",
                                       a.loc or e.loc, InstantiationError)
                else:
                    if isinstance(a, FunRef):
                        raise self.err(f"function {a.name} passed where a value of type {show_type(pt)} "
                                       "is expected", a.loc, TypeCheckError)
                    self.unify(self.infer(a, env, fenv, info), pt, a.loc or e.loc)
            info[id(e)] = (uvars, fargs)
            return rt
        if isinstance(e, Let):
            t = self.infer(e.bound, env, fenv, info)
            return self.infer(e.body, {**env, e.name: t}, fenv, info)
        if isinstance(e, Case):
            st = self.infer(e.scrut, env, fenv, info)
            decl = self.owner[e.branches[0].con]
            uvars = tuple(UVar() for _ in decl.params)
            tenv = dict(zip(decl.params, uvars))
            t = TCon(decl.name, uvars)
            self.unify(st, t, e.scrut.loc or e.loc)
            info[id(e)] = t
            result = UVar()
            for b in e.branches:
                c = next(c for c in decl.constructors if c.name == b.con)
                benv = dict(env)
                for v, ft in zip(b.vars, c.expanded):
                    benv[v] = subst(ft, tenv)
                self.unify(self.infer(b.body, benv, fenv, info), result, b.body.loc or e.loc)
            return result
        raise TypeError(f"unexpected node {e!r}")

    def zonk(self, t, loc):
        t = prune(t)
        if isinstance(t, UVar):
            raise self.err("ambiguous type; add a type annotation via a helper function signature", loc)
        if isinstance(t, TCon):
            return TCon(t.name, tuple(self.zonk(a, loc) for a in t.args)) if t.args else t
        if isinstance(t, TFun):
            return TFun(self.zonk(t.arg, loc), self.zonk(t.res, loc))
        return t

    def rewrite(self, e, fenv, info):
        if isinstance(e, Var):
            return Var(e.name, e.loc)
        if isinstance(e, Con):
            t = self.core_type(self.zonk(info[id(e)], e.loc), e.loc)
            return Con(e.con, [self.rewrite(a, fenv, info) for a in e.args], e.loc, t)
        if isinstance(e, Let):
            return Let(e.name, self.rewrite(e.bound, fenv, info), self.rewrite(e.body, fenv, info), e.loc)
        if isinstance(e, Case):
            t = self.core_type(self.zonk(info[id(e)], e.loc), e.loc)
            branches = [Branch(b.con, list(b.vars), self.rewrite(b.body, fenv, info)) for b in e.branches]
            return Case(self.rewrite(e.scrut, fenv, info), branches, e.loc, t)
        if isinstance(e, Call):
            if e.func in fenv:
                h, htargs, _ = fenv[e.func]
                target = self.request(h, htargs, (), e.loc)
                return Call(target, [self.rewrite(a, fenv, info) for a in e.args], e.loc)
            uvars, fargs = info[id(e)]
            targs = tuple(self.zonk(u, e.loc) for u in uvars)
            finsts = []
            for fa in fargs:
                if fa[0] == "ref":
                    finsts.append((fa[1], tuple(self.zonk(u, e.loc) for u in fa[2])))
                else:
                    finsts.append((fa[1][0], fa[1][1]))
            target = self.request(e.func, targs, tuple(finsts), e.loc)
            args = [self.rewrite(a, fenv, info) for a in e.args
                    if not isinstance(a, FunRef) and not (isinstance(a, Var) and a.name in fenv)]
            return Call(target, args, e.loc)
        raise TypeError(f"unexpected node {e!r}")


def instantiate(program, max_specializations=DEFAULT_MAX_SPECIALIZATIONS):
    """Specialise a desugared program into a first-order monomorphic core."""
    return Instantiator(program, max_specializations).run()
