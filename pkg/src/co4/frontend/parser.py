"""Recursive-descent parser for the Haskell-like surface language.

Layout is handled with *fences*: inside an implicit block whose items
start at column ``n``, a token that begins a line at column ``<= n``
terminates the current item.  Explicit ``{ ... ; ... }`` blocks switch
the fence off.
"""

from ..errors import ParseError, ScopeError
from .lexer import Token, tokenize
from .syntax import (
    Call, Con, ConDecl, DataDecl, FunDef, FunRef, Let, Match, PCon, Program,
    PVar, PWild, TCon, TFun, TVar, TypeSynonym, Var, pattern_vars,
)

_END = Token("end", "", 0, 0)

BOOL_DECL = "data Bool = False | True\n"


class Parser:
    def __init__(self, text, path=None):
        self.path = path
        self.toks = tokenize(text, path)
        self.i = 0
        self.fences = []

    # -- token helpers ----------------------------------------------------

    def peek(self):
        t = self.toks[self.i]
        if self.fences:
            col, start = self.fences[-1]
            if t.bol and t.col <= col and self.i > start:
                return _END
        return t

    def at(self, value, kind=None):
        t = self.peek()
        return t.value == value and t.kind in ((kind,) if kind else ("sym", "kw"))

    def error(self, msg, tok=None):
        tok = tok or self.toks[self.i]
        return ParseError(msg, tok.loc if tok.kind != "eof" else (tok.line, 1), self.path)

    def expect(self, value):
        t = self.peek()
        if t.value != value or t.kind not in ("sym", "kw"):
            got = "end of block" if t is _END else str(self.toks[self.i])
            raise self.error(f"expected {value!r}, found {got}")
        self.i += 1
        return t

    def take(self, kind):
        t = self.peek()
        if t.kind != kind:
            what = {"lower": "identifier", "upper": "constructor or type name"}[kind]
            got = "end of block" if t is _END else str(t)
            raise self.error(f"expected {what}, found {got}")
        self.i += 1
        return t

    # -- program ------------------------------------------------------------

    def program(self):
        decls = []
        while self.toks[self.i].kind != "eof":
            t = self.toks[self.i]
            if t.kind == "sym" and t.value == ";":
                self.i += 1
                continue
            self.fences.append((t.col, self.i))
            decls.append(self.decl())
            self.fences.pop()
            t = self.toks[self.i]
            if t.kind != "eof" and not t.bol and not (t.kind == "sym" and t.value == ";"):
                raise self.error(f"unexpected {t}")
        return decls

    def decl(self):
        t = self.peek()
        if t.kind == "kw" and t.value == "data":
            return self.data_decl()
        if t.kind == "kw" and t.value == "type":
            return self.type_synonym()
        if t.kind == "lower":
            if self.toks[self.i + 1].value == "::":
                self.i += 2
                return ("sig", t.value, self.type_(), t.loc)
            return self.fun_def()
        raise self.error(f"unexpected {t} at start of declaration")

    def data_decl(self):
        start = self.expect("data")
        name = self.take("upper").value
        params = []
        while self.peek().kind == "lower":
            params.append(self.take("lower").value)
        self.expect("=")
        cons = [self.con_decl()]
        while self.at("|"):
            self.i += 1
            cons.append(self.con_decl())
        return DataDecl(name, params, cons, start.loc)

    def con_decl(self):
        t = self.take("upper")
        fields = []
        while self._starts_atype():
            fields.append(self.atype())
        return ConDecl(t.value, fields, t.loc)

    def type_synonym(self):
        start = self.expect("type")
        name = self.take("upper").value
        params = []
        while self.peek().kind == "lower":
            params.append(self.take("lower").value)
        self.expect("=")
        return TypeSynonym(name, params, self.type_(), start.loc)

    def fun_def(self):
        t = self.take("lower")
        params = []
        while self.peek().kind == "lower":
            params.append(self.take("lower").value)
        if self.at("_"):
            raise self.error("patterns in function parameters are not supported; use case")
        self.expect("=")
        body = self.expr()
        if len(set(params)) != len(params):
            raise ParseError(f"duplicate parameter in definition of {t.value}", t.loc, self.path)
        return FunDef(t.value, params, body, None, t.loc)

    # -- types ----------------------------------------------------------------

    def _starts_atype(self):
        t = self.peek()
        return t.kind in ("upper", "lower") or (t.kind == "sym" and t.value == "(")

    def type_(self):
        left = self.btype()
        if self.at("->"):
            self.i += 1
            return TFun(left, self.type_())
        return left

    def btype(self):
        t = self.peek()
        if t.kind == "upper":
            self.i += 1
            args = []
            while self._starts_atype():
                args.append(self.atype())
            return TCon(t.value, tuple(args))
        return self.atype()

    def atype(self):
        t = self.peek()
        if t.kind == "upper":
            self.i += 1
            return TCon(t.value)
        if t.kind == "lower":
            self.i += 1
            return TVar(t.value)
        if t.kind == "sym" and t.value == "(":
            self.i += 1
            ty = self.type_()
            self.expect(")")
            return ty
        raise self.error(f"expected a type, found {t}")

    # -- expressions -------------------------------------------------------------

    def expr(self):
        t = self.peek()
        if t.kind == "kw" and t.value == "let":
            self.i += 1
            binds = self.block(self.binding)
            self.expect("in")
            body = self.expr()
            for name, bound, loc in reversed(binds):
                body = Let(name, bound, body, loc)
            return body
        if t.kind == "kw" and t.value == "case":
            self.i += 1
            scrut = self.expr()
            self.expect("of")
            alts = self.block(self.alt)
            return Match(scrut, alts, t.loc)
        return self.app()

    def _starts_aexpr(self):
        t = self.peek()
        return t.kind in ("upper", "lower") or (t.kind == "sym" and t.value == "(")

    def app(self):
        t = self.peek()
        if not self._starts_aexpr():
            got = "end of block" if t is _END else str(t)
            raise self.error(f"expected an expression, found {got}")
        head = self.aexpr()
        args = []
        while self._starts_aexpr():
            args.append(self.aexpr())
        if not args:
            return head
        if isinstance(head, Con) and not head.args:
            head.args = args
            return head
        if isinstance(head, Var):
            return Call(head.name, args, head.loc)
        raise ParseError("only named functions and constructors can be applied", t.loc, self.path)

    def aexpr(self):
        t = self.peek()
        if t.kind == "lower":
            self.i += 1
            return Var(t.value, t.loc)
        if t.kind == "upper":
            self.i += 1
            return Con(t.value, [], t.loc)
        self.expect("(")
        e = self.expr()
        self.expect(")")
        if isinstance(e, Con) and e.args:
            # keep parenthesised constructor applications closed
            return Con(e.con, e.args, e.loc)
        return e

    def binding(self):
        t = self.take("lower")
        if not self.at("="):
            raise self.error("let bindings must have the form 'name = expr'")
        self.i += 1
        return (t.value, self.expr(), t.loc)

    def alt(self):
        p = self.pattern()
        self.expect("->")
        return (p, self.expr())

    def pattern(self):
        t = self.peek()
        if t.kind == "upper":
            self.i += 1
            args = []
            while self._starts_apat():
                args.append(self.apat())
            return PCon(t.value, tuple(args), t.loc)
        return self.apat()

    def _starts_apat(self):
        t = self.peek()
        return t.kind in ("upper", "lower") or (t.kind == "sym" and t.value in ("(", "_"))

    def apat(self):
        t = self.peek()
        if t.kind == "lower":
            self.i += 1
            return PVar(t.value, t.loc)
        if t.kind == "sym" and t.value == "_":
            self.i += 1
            return PWild(t.loc)
        if t.kind == "upper":
            self.i += 1
            return PCon(t.value, (), t.loc)
        if t.kind == "sym" and t.value == "(":
            self.i += 1
            p = self.pattern()
            self.expect(")")
            return p
        raise self.error(f"expected a pattern, found {t}")

    # -- blocks --------------------------------------------------------------------

    def block(self, item):
        t = self.peek()
        if t.kind == "sym" and t.value == "{":
            self.i += 1
            self.fences.append((0, self.i))
            items = [item()]
            while self.at(";"):
                self.i += 1
                if self.at("}"):
                    break
                items.append(item())
            self.expect("}")
            self.fences.pop()
            return items
        if t is _END or t.kind == "eof":
            raise self.error("empty block")
        col = t.col
        outer = self.fences[-1][0] if self.fences else 0
        items = []
        while True:
            self.fences.append((col, self.i))
            items.append(item())
            self.fences.pop()
            nxt = self.toks[self.i]
            if nxt.kind == "sym" and nxt.value == ";":
                self.i += 1
                continue
            if nxt.kind != "eof" and nxt.bol and nxt.col == col and col > outer:
                continue
            return items


def parse(text, path=None):
    """Parse a program text into a surface :class:`Program`."""
    p = Parser(text, path)
    decls = p.program()
    datas, synonyms, functions, sigs = {}, {}, {}, {}
    seen_cons = {}
    for d in decls:
        if isinstance(d, DataDecl):
            if d.name in datas or d.name in synonyms:
                raise ParseError(f"duplicate definition of type {d.name}", d.loc, path)
            datas[d.name] = d
            for c in d.constructors:
                if c.name in seen_cons:
                    raise ParseError(f"duplicate definition of constructor {c.name}", c.loc, path)
                seen_cons[c.name] = d.name
        elif isinstance(d, TypeSynonym):
            if d.name in datas or d.name in synonyms:
                raise ParseError(f"duplicate definition of type {d.name}", d.loc, path)
            synonyms[d.name] = d
        elif isinstance(d, FunDef):
            if d.name in functions:
                raise ParseError(f"duplicate definition of {d.name}", d.loc, path)
            functions[d.name] = d
        else:
            _, name, ty, loc = d
            if name in sigs:
                raise ParseError(f"duplicate type signature for {name}", loc, path)
            sigs[name] = (ty, loc)
    for name, (ty, loc) in sigs.items():
        if name not in functions:
            raise ParseError(f"type signature for {name} lacks a definition", loc, path)
        functions[name].sig = ty
    if "main" not in functions:
        raise ParseError("no main", None, path)
    if "Bool" not in datas:
        datas["Bool"] = Parser(BOOL_DECL).program()[0]
        for c in datas["Bool"].constructors:
            if c.name in seen_cons:
                raise ParseError(f"constructor {c.name} clashes with the built-in Bool", None, path)
    else:
        bool_cons = [(c.name, len(c.fields)) for c in datas["Bool"].constructors]
        if datas["Bool"].params or bool_cons != [("False", 0), ("True", 0)]:
            raise ParseError("Bool must be declared as 'data Bool = False | True'", datas["Bool"].loc, path)
    prog = Program(datas, synonyms, functions, path)
    resolve(prog)
    return prog


def resolve(prog):
    """Check scoping and classify bare identifiers.

    A bare name that is not locally bound becomes ``Call(f, [])`` when
    ``f`` is a nullary top-level function and ``FunRef(f)`` otherwise.
    """
    owners = prog.constructor_owner()
    funs = prog.functions

    def err(msg, loc):
        return ScopeError(msg, loc, prog.path)

    def go(e, bound):
        if isinstance(e, Var):
            if e.name in bound:
                return e
            f = funs.get(e.name)
            if f is None:
                raise err(f"unbound variable {e.name}", e.loc)
            if f.params:
                return FunRef(e.name, e.loc)
            return Call(e.name, [], e.loc)
        if isinstance(e, Con):
            if e.con not in owners:
                raise err(f"unknown constructor {e.con}", e.loc)
            e.args = [go(a, bound) for a in e.args]
            return e
        if isinstance(e, Call):
            if e.func not in bound and e.func not in funs:
                raise err(f"unknown function {e.func}", e.loc)
            e.args = [go(a, bound) for a in e.args]
            return e
        if isinstance(e, Let):
            e.bound = go(e.bound, bound)
            e.body = go(e.body, bound | {e.name})
            return e
        if isinstance(e, Match):
            e.scrut = go(e.scrut, bound)
            alts = []
            for p, body in e.alts:
                check_pattern(p)
                names = pattern_vars(p)
                if len(set(names)) != len(names):
                    raise err("variable bound twice in pattern", p.loc)
                alts.append((p, go(body, bound | set(names))))
            e.alts = alts
            return e
        raise TypeError(f"unexpected node {e!r}")

    def check_pattern(p):
        if isinstance(p, PCon):
            if p.con not in owners:
                raise err(f"unknown constructor {p.con} in pattern", p.loc)
            for a in p.args:
                check_pattern(a)

    for f in funs.values():
        f.body = go(f.body, frozenset(f.params))
    return prog


def parse_file(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), str(path))
