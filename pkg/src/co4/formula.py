"""Hash-consed boolean formula DAG and on-the-fly Tseitin encoding.

Formulas are signed integers.  A positive integer names a node (a
variable or an n-ary And gate), the negative integer is its negation.
Node 1 is the constant ``TRUE``, so ``FALSE == -1``.  Or-gates are
stored as negated And-gates over negated children, which makes
``mk_not`` free and gives De Morgan normalisation for nothing.

Node ids double as CNF variable ids: the Tseitin literal of a gate is
the gate id itself, drawn from the same counter as allocator variables.
"""

from array import array
from collections.abc import Mapping

TRUE = 1
FALSE = -1


class MissingVariable(KeyError):
    """An assignment does not cover a variable reachable from a formula."""


class Circuit:
    """Store of formula nodes.

    ``gates_built`` counts every non-trivial gate request, including
    requests answered from the hash-cons table.  It measures the size the
    formula would have without structural sharing.
    """

    def __init__(self):
        # index 0 is unused, index 1 is the TRUE constant
        self._children = [None, ()]
        self._table = {}
        self.gates_built = 0

    @property
    def num_nodes(self):
        return len(self._children) - 1

    @property
    def num_gates(self):
        return len(self._table)

    @property
    def num_vars(self):
        return self.num_nodes - self.num_gates - 1

    def var(self):
        self._children.append(None)
        return len(self._children) - 1

    def fresh(self, n):
        return [self.var() for _ in range(n)]

    # -- inspection ---------------------------------------------------

    def is_var(self, x):
        return abs(x) != TRUE and self._children[abs(x)] is None

    def is_gate(self, x):
        return abs(x) != TRUE and self._children[abs(x)] is not None

    def children(self, x):
        """Children of the And-gate underlying ``x`` (sign ignored)."""
        return self._children[abs(x)] or ()

    def describe(self, x):
        """Return ``(kind, operands)`` for display and tests.

        kind is one of 'true', 'false', 'var', 'not', 'and', 'or'.
        """
        if x == TRUE:
            return "true", ()
        if x == FALSE:
            return "false", ()
        kids = self._children[abs(x)]
        if kids is None:
            return ("var", (x,)) if x > 0 else ("not", (-x,))
        if x > 0:
            return "and", kids
        return "or", tuple(-k for k in kids)

    def variables(self, roots):
        """All variable ids reachable from the given formulas."""
        seen = set()
        out = set()
        stack = [abs(r) for r in roots]
        children = self._children
        while stack:
            n = stack.pop()
            if n in seen or n == TRUE:
                continue
            seen.add(n)
            kids = children[n]
            if kids is None:
                out.add(n)
            else:
                stack.extend(abs(k) for k in kids)
        return out

    # -- simplifying constructors -------------------------------------

    def mk_not(self, x):
        return -x

    def mk_and(self, xs):
        s = set()
        for x in xs:
            if x == TRUE:
                continue
            if x == FALSE:
                return FALSE
            s.add(x)
        if not s:
            return TRUE
        if len(s) == 1:
            return s.pop()
        key = tuple(sorted(s))
        self.gates_built += 1
        node = self._table.get(key)
        if node is None:
            self._children.append(key)
            node = len(self._children) - 1
            self._table[key] = node
        return node

    def mk_or(self, xs):
        return -self.mk_and([-x for x in xs])

    def mk_implies(self, a, b):
        return self.mk_or([-a, b])

    def mk_iff(self, a, b):
        if a == b:
            return TRUE
        if a == -b:
            return FALSE
        if a == TRUE:
            return b
        if a == FALSE:
            return -b
        if b == TRUE:
            return a
        if b == FALSE:
            return -a
        return self.mk_and([self.mk_or([-a, b]), self.mk_or([a, -b])])

    def mk_ite(self, c, t, e):
        if t == e:
            return t
        return self.mk_and([self.mk_or([-c, t]), self.mk_or([c, e])])

    def is_const_false(self, x):
        return x == FALSE

    def is_const_true(self, x):
        return x == TRUE

    # -- semantics ------------------------------------------------------

    def evaluate(self, x, sigma, cache=None):
        """Value of ``x`` under ``sigma`` (a mapping var id -> bool)."""
        if cache is None:
            cache = {}
        n = abs(x)
        if n == TRUE:
            return x > 0
        children = self._children
        stack = [n]
        while stack:
            m = stack[-1]
            if m in cache:
                stack.pop()
                continue
            kids = children[m]
            if kids is None:
                try:
                    cache[m] = bool(sigma[m])
                except (KeyError, IndexError):
                    raise MissingVariable(m) from None
                stack.pop()
                continue
            pending = [abs(k) for k in kids if abs(k) != TRUE and abs(k) not in cache]
            if pending:
                stack.extend(pending)
                continue
            val = True
            for k in kids:
                a = abs(k)
                kv = True if a == TRUE else cache[a]
                if k < 0:
                    kv = not kv
                if not kv:
                    val = False
                    break
            cache[m] = val
            stack.pop()
        v = cache[n]
        return v if x > 0 else not v


class Assignment(Mapping):
    """Total map from propositional variable ids to booleans."""

    def __init__(self, values=None, default=None):
        self._values = dict(values or {})
        self._default = default

    def __getitem__(self, v):
        try:
            return self._values[v]
        except KeyError:
            if self._default is None:
                raise
            return self._default

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def __repr__(self):
        return f"Assignment({self._values!r})"

    @classmethod
    def from_literals(cls, lits, default=False):
        return cls({abs(l): l > 0 for l in lits if l}, default=default)


class CnfBuilder:
    """Accumulates clauses for the formulas handed to it.

    Clauses live in a flat ``array('i')`` separated by zeros, which keeps
    memory at four bytes per literal for multi-million clause problems.
    """

    def __init__(self, circuit):
        self.circuit = circuit
        self.flat = array("i")
        self.num_clauses = 0
        self._named = bytearray(circuit.num_nodes + 1)

    @property
    def num_vars(self):
        return self.circuit.num_nodes

    def add_clause(self, lits):
        self.flat.extend(lits)
        self.flat.append(0)
        self.num_clauses += 1

    def clauses(self):
        clause = []
        for lit in self.flat:
            if lit == 0:
                yield clause
                clause = []
            else:
                clause.append(lit)

    def literal(self, root):
        """Tseitin literal for ``root``, emitting clauses for unseen gates."""
        named = self._named
        need = self.circuit.num_nodes + 1
        if len(named) < need:
            named.extend(bytes(need - len(named)))
        children = self.circuit._children
        if abs(root) == TRUE:
            if not named[TRUE]:
                named[TRUE] = 1
                self.add_clause((TRUE,))
            return root
        stack = [abs(root)]
        flat = self.flat
        while stack:
            n = stack.pop()
            if named[n]:
                continue
            named[n] = 1
            kids = children[n]
            if kids is None:
                continue
            # n -> k for each child, and (all children) -> n
            for k in kids:
                flat.append(-n)
                flat.append(k)
                flat.append(0)
            for k in kids:
                flat.append(-k)
            flat.append(n)
            flat.append(0)
            self.num_clauses += len(kids) + 1
            for k in kids:
                a = abs(k)
                if a == TRUE:
                    continue
                if not named[a]:
                    stack.append(a)
        return root

    def assert_formula(self, root):
        lit = self.literal(root)
        self.add_clause((lit,))
        return lit


def tseitin(builder, root):
    return builder.literal(root)
