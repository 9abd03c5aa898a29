"""Translate nested/partial pattern matches into simple, complete cases.

Uses the classic clause-matrix scheme, always splitting on the leftmost
constructor column of the first row.  That column is exactly the one a
top-to-bottom, left-to-right matcher forces first, so the forcing order
(and hence behaviour on partial values) is unchanged.
"""

import itertools

from ..errors import PatternError
from .syntax import (
    Branch, Call, Case, Con, FunDef, FunRef, Let, Match, PCon, Program, PVar,
    PWild, Var,
)

_ids = itertools.count(1)


def fresh(prefix="p"):
    # '#' cannot appear in source identifiers
    return f"{prefix}#{next(_ids)}"


def rename(e, mapping):
    """Capture-avoiding renaming of free variables."""
    if not mapping:
        return e
    if isinstance(e, Var):
        return Var(mapping.get(e.name, e.name), e.loc)
    if isinstance(e, FunRef):
        return e
    if isinstance(e, Con):
        return Con(e.con, [rename(a, mapping) for a in e.args], e.loc, e.type)
    if isinstance(e, Call):
        return Call(mapping.get(e.func, e.func), [rename(a, mapping) for a in e.args], e.loc)
    if isinstance(e, Let):
        bound = rename(e.bound, mapping)
        name, inner = _enter(e.name, mapping)
        return Let(name, bound, rename(e.body, inner), e.loc)
    if isinstance(e, Case):
        branches = []
        for b in e.branches:
            inner = mapping
            names = []
            for v in b.vars:
                v2, inner = _enter(v, inner)
                names.append(v2)
            branches.append(Branch(b.con, names, rename(b.body, inner)))
        return Case(rename(e.scrut, mapping), branches, e.loc, e.type)
    raise TypeError(f"cannot rename {type(e).__name__}")


def _enter(binder, mapping):
    inner = {k: v for k, v in mapping.items() if k != binder}
    if binder in inner.values():
        new = fresh(binder.split("#")[0])
        inner[binder] = new
        return new, inner
    return binder, inner


class Desugarer:
    def __init__(self, program):
        self.program = program
        self.owner = program.constructor_owner()

    def err(self, msg, loc):
        return PatternError(msg, loc, self.program.path)

    def expr(self, e):
        if isinstance(e, (Var, FunRef)):
            return e
        if isinstance(e, Con):
            return Con(e.con, [self.expr(a) for a in e.args], e.loc, e.type)
        if isinstance(e, Call):
            return Call(e.func, [self.expr(a) for a in e.args], e.loc)
        if isinstance(e, Let):
            return Let(e.name, self.expr(e.bound), self.expr(e.body), e.loc)
        if isinstance(e, Case):
            return Case(self.expr(e.scrut),
                        [Branch(b.con, list(b.vars), self.expr(b.body)) for b in e.branches],
                        e.loc, e.type)
        if isinstance(e, Match):
            return self.match(e)
        raise TypeError(f"unexpected node {e!r}")

    def match(self, m):
        scrut = self.expr(m.scrut)
        rows = []
        for idx, (p, body) in enumerate(m.alts):
            rows.append(([p], [], self.expr(body), idx))
        used = set()
        first = rows[0][0][0]
        if not isinstance(first, PCon):
            # irrefutable first alternative: force the scrutinee and bind it
            used.add(0)
            self._check_redundant(m, used)
            name = first.name if isinstance(first, PVar) else fresh("w")
            return Let(name, scrut, rows[0][2], m.loc)
        if isinstance(scrut, Var):
            out = self.compile([scrut.name], rows, used, m.loc)
        else:
            occ = fresh("d")
            out = Let(occ, scrut, self.compile([occ], rows, used, m.loc), m.loc)
        self._check_redundant(m, used)
        return out

    def _check_redundant(self, m, used):
        for idx, (p, _) in enumerate(m.alts):
            if idx not in used:
                raise self.err("redundant (overlapping) case alternative", p.loc or m.loc)

    def compile(self, occs, rows, used, loc):
        pats, binds, body, idx = rows[0]
        col = next((j for j, p in enumerate(pats) if isinstance(p, PCon)), None)
        if col is None:
            used.add(idx)
            mapping = dict(binds)
            for p, occ in zip(pats, occs):
                if isinstance(p, PVar):
                    mapping[p.name] = occ
            return rename(body, mapping)
        decl = self.owner[pats[col].con]
        occ = occs[col]
        branches = []
        for con in decl.constructors:
            arity = len(con.fields)
            names = [fresh() for _ in range(arity)]
            sub_rows = []
            for rpats, rbinds, rbody, ridx in rows:
                p = rpats[col]
                if isinstance(p, PCon):
                    if self.owner[p.con] is not decl:
                        raise self.err(f"constructor {p.con} does not belong to type {decl.name}", p.loc)
                    if p.con != con.name:
                        continue
                    if len(p.args) != arity:
                        raise self.err(f"constructor {p.con} expects {arity} argument(s) in pattern, got {len(p.args)}", p.loc)
                    sub = list(p.args)
                    nb = rbinds
                else:
                    sub = [PWild()] * arity
                    nb = rbinds + [(p.name, occ)] if isinstance(p, PVar) else rbinds
                sub_rows.append((rpats[:col] + sub + rpats[col + 1:], nb, rbody, ridx))
            if not sub_rows:
                raise self.err(f"non-exhaustive case: constructor {con.name} is not covered", loc)
            sub_occs = occs[:col] + names + occs[col + 1:]
            branches.append(Branch(con.name, names, self.compile(sub_occs, sub_rows, used, loc)))
        return Case(Var(occ, loc), branches, loc)


def desugar(program):
    """Return a copy of ``program`` whose cases are simple and complete."""
    d = Desugarer(program)
    funs = {}
    for name, f in program.functions.items():
        funs[name] = FunDef(f.name, list(f.params), d.expr(f.body), f.sig, f.loc)
    return Program(dict(program.datas), dict(program.synonyms), funs, program.path)
