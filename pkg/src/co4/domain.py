"""Abstract values: formula trees that stand for sets of data terms.

An abstract value is a node ``(flags, args, defined)``.  Under an
assignment the flags spell a constructor number through a fixed prefix
code, the arguments decode to the constructor's fields, and
``defined`` must hold for the node to denote anything other than ⊥.

Nodes are interned in an :class:`AbstractStore`, so structurally equal
values built through the same store are the same Python object.  That
identity is what the evaluator's memo table keys on.
"""

from functools import lru_cache

from .errors import AllocatorError, EncodeError, ValueTypeError
from .formula import FALSE, TRUE
from .values import BOTTOM, Value

# -- prefix code -----------------------------------------------------------


@lru_cache(maxsize=None)
def prefix_code(n):
    """The n codewords (as bit tuples) in lexicographic order."""
    if n < 1:
        raise ValueError("a prefix code needs at least one codeword")
    if n == 1:
        return ((),)
    hi = (n + 1) // 2
    return tuple((0,) + w for w in prefix_code(hi)) + tuple((1,) + w for w in prefix_code(n - hi))


def code_length(n):
    """Length of the longest codeword for ``n`` constructors."""
    return (n - 1).bit_length()


def numeric(c, bits):
    """1-based rank of the codeword that prefixes ``bits``, or None if too short."""
    offset, n, pos = 0, c, 0
    while n > 1:
        if pos >= len(bits):
            return None
        hi = (n + 1) // 2
        if bits[pos]:
            offset += hi
            n -= hi
        else:
            n = hi
        pos += 1
    return offset + 1


def codeword(c, i):
    """Codeword of the i-th (1-based) of c constructors."""
    return prefix_code(c)[i - 1]


# -- abstract values --------------------------------------------------------


class AbstractValue:
    __slots__ = ("flags", "args", "defined", "__weakref__")

    def __init__(self, flags, args, defined):
        self.flags = flags
        self.args = args
        self.defined = defined

    def __repr__(self):
        return f"AbstractValue({list(self.flags)}, {list(self.args)}, {self.defined})"

    def size(self):
        """Number of nodes in the tree (shared nodes counted once)."""
        seen, stack = set(), [self]
        while stack:
            a = stack.pop()
            if id(a) in seen:
                continue
            seen.add(id(a))
            stack.extend(a.args)
        return len(seen)


BOTTOM_VALUE = AbstractValue((), (), FALSE)


class AbstractStore:
    """Hash-consing factory for abstract values over one circuit."""

    def __init__(self, circuit, types):
        self.circuit = circuit
        self.types = types
        self._table = {}
        self._sel_cache = {}
        self.created = 0

    def make(self, flags, args, defined):
        if defined == FALSE:
            return BOTTOM_VALUE
        flags = tuple(flags)
        args = tuple(args)
        key = (flags, tuple(map(id, args)), defined)
        a = self._table.get(key)
        if a is None:
            a = AbstractValue(flags, args, defined)
            self._table[key] = a
            self.created += 1
        return a

    def __len__(self):
        return len(self._table)

    def with_defined(self, a, defined):
        if defined == a.defined:
            return a
        return self.make(a.flags, a.args, defined)

    def selectors(self, flags, c):
        """Formulas ``numeric_c(flags) = k`` for k = 1..c (index 0-based).

        Positions beyond a codeword are don't-care; a codeword longer than
        the available flags yields FALSE.
        """
        flags = tuple(flags)
        key = (flags, c)
        out = self._sel_cache.get(key)
        if out is None:
            out = []
            self._selectors(flags, 0, c, TRUE, out)
            out = tuple(out)
            self._sel_cache[key] = out
        return out

    def _selectors(self, flags, pos, n, guard, out):
        if n == 1:
            out.append(guard)
            return
        hi = (n + 1) // 2
        if pos >= len(flags) or guard == FALSE:
            out.extend([FALSE] * n)
            return
        f = flags[pos]
        mk = self.circuit.mk_and
        self._selectors(flags, pos + 1, hi, mk([guard, -f]), out)
        self._selectors(flags, pos + 1, n - hi, mk([guard, f]), out)

    def valid_selection(self, flags, c, sels=None):
        """Holds iff the flags are long enough to spell some codeword."""
        if len(flags) >= code_length(c):
            return TRUE
        if sels is None:
            sels = self.selectors(flags, c)
        return self.circuit.mk_or(sels)

    def constant(self, c, i):
        return tuple(TRUE if b else FALSE for b in codeword(c, i))

    # -- encode / decode ---------------------------------------------------

    def encode(self, tname, v):
        """Constant abstract value for the total value ``v`` of type ``tname``."""
        cache = {}
        # post-order walk without recursion; shared subterms are encoded once
        stack = [(tname, v, False)]
        while stack:
            t, x, ready = stack.pop()
            key = (t, x)
            if key in cache:
                continue
            if x is BOTTOM:
                raise EncodeError("cannot encode ⊥")
            dt = self.types.get(t)
            if dt is None:
                raise EncodeError(f"unknown type {t}")
            con = dt.constructor(x.con) if isinstance(x, Value) else None
            if con is None:
                raise EncodeError(f"{x} is not a constructor of {t}")
            if len(x.args) != con.arity:
                raise EncodeError(f"constructor {x.con} expects {con.arity} argument(s), got {len(x.args)}")
            if ready:
                args = [cache[(ft, y)] for ft, y in zip(con.fields, x.args)]
                cache[key] = self.make(self.constant(len(dt), con.index + 1), args, TRUE)
            else:
                stack.append((t, x, True))
                stack.extend((ft, y, False) for ft, y in zip(con.fields, x.args))
        return cache[(tname, v)]

    def decode(self, tname, a, sigma, cache=None):
        return decode(self.types, self.circuit, tname, a, sigma, cache)

    # -- allocators -----------------------------------------------------------

    def allocate(self, shape):
        """Fresh variables for every flag of the shape, in preorder."""
        nflags, children = shape
        flags = self.circuit.fresh(nflags)
        args = [self.allocate(s) for s in children]
        return self.make(flags, args, TRUE)

    def complete_allocator(self, tname):
        return self.allocate(complete_shape(self.types, tname))

    def bounded_allocator(self, tname, bounds):
        a = self.allocate(bounded_shape(self.types, tname, bounds))
        return self.normalize(a, tname)

    # -- well-formedness -------------------------------------------------------

    def validity(self, a, tname):
        """Holds iff node ``a`` has enough flags and arguments for type ``tname``."""
        dt = self.types[tname]
        c = len(dt)
        sels = self.selectors(a.flags, c)
        parts = [self.valid_selection(a.flags, c, sels)]
        for k, con in enumerate(dt.constructors):
            if con.arity > len(a.args):
                parts.append(-sels[k])
        return self.circuit.mk_and(parts)

    def normalize(self, a, tname):
        """Make every node's definedness imply that it decodes.

        A node that lacks flags or arguments for the constructor its flags
        select decodes to ⊥ even when its definedness formula holds.  This
        folds that condition into the definedness, for every type the node
        may be decoded at, without changing any decode.  Returns ``a``
        itself when nothing needs to change.
        """
        return self._normalize(a, {tname: TRUE}, {})

    def _normalize(self, a, guards, memo):
        key = (id(a), tuple(sorted(guards.items())))
        hit = memo.get(key)
        if hit is not None:
            return hit
        mk = self.circuit.mk_and
        conds = [a.defined]
        child_guards = [dict() for _ in a.args]
        for tname, g in guards.items():
            dt = self.types[tname]
            conds.append(self.circuit.mk_implies(g, self.validity(a, tname)))
            sels = self.selectors(a.flags, len(dt))
            for k, con in enumerate(dt.constructors):
                if sels[k] == FALSE:
                    continue
                for j, ft in enumerate(con.fields[: len(a.args)]):
                    cg = mk([g, sels[k]])
                    if cg == FALSE:
                        continue
                    prev = child_guards[j].get(ft)
                    child_guards[j][ft] = cg if prev is None else self.circuit.mk_or([prev, cg])
        args = tuple(self._normalize(x, cg, memo) if cg else x for x, cg in zip(a.args, child_guards))
        defined = mk(conds)
        if defined == a.defined and all(x is y for x, y in zip(args, a.args)):
            out = a
        else:
            out = self.make(a.flags, args, defined)
        memo[key] = out
        return out

    def totality(self, a, tname, memo=None):
        """Formula asserting that ``a`` decodes to a value without ⊥."""
        if memo is None:
            memo = {}
        key = (id(a), tname)
        hit = memo.get(key)
        if hit is not None:
            return hit
        dt = self.types[tname]
        sels = self.selectors(a.flags, len(dt))
        parts = [a.defined, self.validity(a, tname)]
        for k, con in enumerate(dt.constructors):
            if sels[k] == FALSE or con.arity > len(a.args):
                continue
            sub = [self.totality(a.args[j], ft, memo) for j, ft in enumerate(con.fields)]
            parts.append(self.circuit.mk_implies(sels[k], self.circuit.mk_and(sub)))
        out = self.circuit.mk_and(parts)
        memo[key] = out
        return out


# -- decode -------------------------------------------------------------------


def decode(types, circuit, tname, a, sigma, cache=None):
    """Concrete value of ``a`` under ``sigma``; ⊥ where undefined.

    Missing flags or missing arguments decode to ⊥, extra ones are
    ignored.  Uses an explicit stack, so deep values are fine.
    """
    if cache is None:
        cache = {}

    def ev(f):
        return circuit.evaluate(f, sigma, cache)

    nodes = []
    stack = [(tname, a)]
    while stack:
        t, x = stack.pop()
        if not ev(x.defined):
            nodes.append(None)
            continue
        dt = types[t]
        i = _numeric_lazy(len(dt), x.flags, ev)
        if i is None:
            nodes.append(None)
            continue
        con = dt.constructors[i - 1]
        if con.arity > len(x.args):
            nodes.append(None)
            continue
        nodes.append((con.name, con.arity))
        for j in range(con.arity - 1, -1, -1):
            stack.append((con.fields[j], x.args[j]))
    # nodes is in preorder; rebuild bottom-up
    values = []
    for node in reversed(nodes):
        if node is None:
            values.append(BOTTOM)
        else:
            name, arity = node
            args = tuple(values.pop() for _ in range(arity))
            values.append(Value(name, args))
    return values[0]


def _numeric_lazy(c, flags, ev):
    offset, n, pos = 0, c, 0
    while n > 1:
        if pos >= len(flags):
            return None
        hi = (n + 1) // 2
        if ev(flags[pos]):
            offset += hi
            n -= hi
        else:
            n = hi
        pos += 1
    return offset + 1


# -- shapes -------------------------------------------------------------------
#
# A shape is (number of flags, tuple of child shapes).  Allocators are built
# from shapes; unions take pointwise maxima.


def union_shape(s, t):
    if s is None:
        return t
    if t is None:
        return s
    n = max(len(s[1]), len(t[1]))
    kids = tuple(union_shape(s[1][j] if j < len(s[1]) else None, t[1][j] if j < len(t[1]) else None)
                 for j in range(n))
    return (max(s[0], t[0]), kids)


def type_sccs(types):
    """Map each type to (scc id, is_recursive)."""
    import networkx as nx

    g = nx.DiGraph()
    for t, dt in types.items():
        g.add_node(t)
        for con in dt.constructors:
            for f in con.fields:
                g.add_edge(t, f)
    out = {}
    for i, comp in enumerate(nx.strongly_connected_components(g)):
        rec = len(comp) > 1 or any(g.has_edge(t, t) for t in comp)
        for t in comp:
            out[t] = (i, rec)
    return out


def complete_shape(types, tname):
    scc = type_sccs(types)
    if tname not in types:
        raise AllocatorError(f"unknown type {tname}")

    @lru_cache(maxsize=None)
    def go(t):
        if scc[t][1]:
            raise AllocatorError(f"type {t} is recursive; a complete allocator needs a finite type "
                                 "(use a bounded allocator)")
        dt = types[t]
        kids = []
        for con in dt.constructors:
            for j, f in enumerate(con.fields):
                s = go(f)
                if j < len(kids):
                    kids[j] = union_shape(kids[j], s)
                else:
                    kids.append(s)
        return (code_length(len(dt)), tuple(kids))

    return go(tname)


def _bound(bounds, t):
    if isinstance(bounds, int):
        return bounds
    if t in bounds:
        return bounds[t]
    if "default" in bounds:
        return bounds["default"]
    raise AllocatorError(f"no size bound given for recursive type {t}")


def bounded_shape(types, tname, bounds):
    """Shape of an allocator whose recursive types are unrolled to a depth.

    ``bounds`` is an int or a dict from type name to depth, with an
    optional ``'default'`` entry.  The depth counts unrollings inside one
    group of mutually recursive types; entering a different group starts
    afresh with that group's bound.
    """
    if tname not in types:
        raise AllocatorError(f"unknown type {tname}")
    scc = type_sccs(types)
    for t, d in ([] if isinstance(bounds, int) else bounds.items()):
        if t != "default" and t not in types:
            raise AllocatorError(f"size bound for unknown type {t}")
        if not isinstance(d, int) or d < 0:
            raise AllocatorError(f"size bound for {t} must be a non-negative integer")
    if isinstance(bounds, int) and bounds < 0:
        raise AllocatorError("size bound must be a non-negative integer")
    memo = {}

    def go(t, remaining):
        sid, rec = scc[t]
        if rec and all(k != sid for k, _ in remaining):
            remaining = remaining + ((sid, _bound(bounds, t)),)
        key = (t, remaining)
        hit = memo.get(key)
        if hit is not None:
            return hit
        depth = dict(remaining).get(sid)
        dt = types[t]
        kids = []
        for con in dt.constructors:
            if rec and depth == 0 and any(scc[f][0] == sid for f in con.fields):
                continue
            for j, f in enumerate(con.fields):
                if rec and scc[f][0] == sid:
                    sub = tuple((k, d - 1 if k == sid else d) for k, d in remaining)
                else:
                    sub = remaining
                s = go(f, sub)
                if j < len(kids):
                    kids[j] = union_shape(kids[j], s)
                else:
                    kids.append(s)
        out = (code_length(len(dt)), tuple(kids))
        memo[key] = out
        return out

    return go(tname, ())


def unknown_variables(circuit, a):
    """Variables occurring in the flags or definedness of ``a``, recursively."""
    roots, seen, stack = [], set(), [a]
    while stack:
        x = stack.pop()
        if id(x) in seen:
            continue
        seen.add(id(x))
        roots.extend(x.flags)
        roots.append(x.defined)
        stack.extend(x.args)
    return circuit.variables(roots)


# -- concrete value checks ------------------------------------------------------


def check_value(types, tname, v, allow_bottom=False):
    """Raise ValueTypeError unless ``v`` is a well-typed value of ``tname``."""
    stack = [(tname, v)]
    while stack:
        t, x = stack.pop()
        if x is BOTTOM:
            if allow_bottom:
                continue
            raise ValueTypeError(f"unexpected ⊥ in value of type {tname}")
        dt = types.get(t)
        if dt is None:
            raise ValueTypeError(f"unknown type {t}")
        con = dt.constructor(x.con) if isinstance(x, Value) else None
        if con is None:
            raise ValueTypeError(f"{x} is not a value of type {t}")
        if len(x.args) != con.arity:
            raise ValueTypeError(f"constructor {x.con} expects {con.arity} argument(s), got {len(x.args)}")
        stack.extend(zip(con.fields, x.args))
    return v


def enumerate_values(types, tname, limit=100000):
    """All total values of a finite type (for tests and oracles)."""
    from itertools import product

    scc = type_sccs(types)

    @lru_cache(maxsize=None)
    def go(t):
        if scc[t][1]:
            raise ValueError(f"type {t} is infinite")
        out = []
        for con in types[t].constructors:
            for args in product(*(go(f) for f in con.fields)):
                out.append(Value(con.name, tuple(args)))
                if len(out) > limit:
                    raise ValueError("too many values")
        return tuple(out)

    return list(go(tname))
