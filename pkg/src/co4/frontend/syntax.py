"""Surface and core syntax trees.

Expressions are shared between stages.  The parser produces ``Match``
nodes with arbitrary patterns; desugaring replaces them with ``Case``
nodes (simple, complete, branches in declaration order).  After
instantiation ``Con`` and ``Case`` carry the monomorphic type name.
"""

from dataclasses import dataclass, field

# -- types ---------------------------------------------------------------


@dataclass(frozen=True)
class TCon:
    name: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.name
        parts = [self.name]
        for a in self.args:
            s = str(a)
            parts.append(f"({s})" if " " in s else s)
        return " ".join(parts)


@dataclass(frozen=True)
class TVar:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class TFun:
    arg: object
    res: object

    def __str__(self):
        a = str(self.arg)
        if isinstance(self.arg, TFun):
            a = f"({a})"
        return f"{a} -> {self.res}"


def split_fun(t, n):
    """Peel ``n`` argument types off a curried function type."""
    params = []
    for _ in range(n):
        if not isinstance(t, TFun):
            return None, None
        params.append(t.arg)
        t = t.res
    return params, t


def type_vars(t, acc=None):
    if acc is None:
        acc = []
    if isinstance(t, TVar):
        if t.name not in acc:
            acc.append(t.name)
    elif isinstance(t, TCon):
        for a in t.args:
            type_vars(a, acc)
    elif isinstance(t, TFun):
        type_vars(t.arg, acc)
        type_vars(t.res, acc)
    return acc


# -- patterns --------------------------------------------------------------


@dataclass(frozen=True)
class PVar:
    name: str
    loc: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class PWild:
    loc: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class PCon:
    con: str
    args: tuple = ()
    loc: tuple = field(default=None, compare=False)


# -- expressions -------------------------------------------------------------


@dataclass(eq=False)
class Var:
    name: str
    loc: tuple = None


@dataclass(eq=False)
class FunRef:
    """A top-level function used as an argument to a higher-order call."""

    name: str
    loc: tuple = None


@dataclass(eq=False)
class Con:
    con: str
    args: list
    loc: tuple = None
    type: str = None


@dataclass(eq=False)
class Call:
    func: str
    args: list
    loc: tuple = None


@dataclass(eq=False)
class Let:
    name: str
    bound: object
    body: object
    loc: tuple = None


@dataclass(eq=False)
class Match:
    scrut: object
    alts: list  # of (pattern, expr)
    loc: tuple = None


@dataclass(eq=False)
class Branch:
    con: str
    vars: list
    body: object


@dataclass(eq=False)
class Case:
    scrut: object
    branches: list
    loc: tuple = None
    type: str = None


# -- declarations ----------------------------------------------------------


@dataclass
class ConDecl:
    name: str
    fields: list
    loc: tuple = None


@dataclass
class DataDecl:
    name: str
    params: list
    constructors: list
    loc: tuple = None


@dataclass
class TypeSynonym:
    name: str
    params: list
    rhs: object
    loc: tuple = None


@dataclass
class FunDef:
    name: str
    params: list
    body: object
    sig: object = None
    loc: tuple = None


@dataclass
class Program:
    datas: dict
    synonyms: dict
    functions: dict
    path: str = None

    def constructor_owner(self):
        return {c.name: d for d in self.datas.values() for c in d.constructors}


# -- core program -----------------------------------------------------------


@dataclass(frozen=True)
class Constructor:
    name: str
    fields: tuple
    index: int

    @property
    def arity(self):
        return len(self.fields)


@dataclass
class DataType:
    name: str
    constructors: tuple

    def __post_init__(self):
        self._by_name = {c.name: c for c in self.constructors}

    def constructor(self, name):
        return self._by_name.get(name)

    def __len__(self):
        return len(self.constructors)


@dataclass
class Function:
    name: str
    params: list
    param_types: list
    result_type: str
    body: object
    loc: tuple = None


@dataclass
class CoreProgram:
    types: dict
    functions: dict
    main: str = "main"
    path: str = None

    @property
    def main_function(self):
        return self.functions[self.main]


def free_vars(e):
    """Free variable names of an expression (patterns bind their variables)."""
    out = set()

    def go(e, bound):
        if isinstance(e, Var):
            if e.name not in bound:
                out.add(e.name)
        elif isinstance(e, (Con, Call)):
            for a in e.args:
                go(a, bound)
        elif isinstance(e, Let):
            go(e.bound, bound)
            go(e.body, bound | {e.name})
        elif isinstance(e, Case):
            go(e.scrut, bound)
            for b in e.branches:
                go(b.body, bound | set(b.vars))
        elif isinstance(e, Match):
            go(e.scrut, bound)
            for p, body in e.alts:
                go(body, bound | set(pattern_vars(p)))

    go(e, frozenset())
    return out


def pattern_vars(p):
    if isinstance(p, PVar):
        return [p.name]
    if isinstance(p, PCon):
        out = []
        for a in p.args:
            out.extend(pattern_vars(a))
        return out
    return []
