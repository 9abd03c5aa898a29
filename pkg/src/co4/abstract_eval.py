"""Abstract evaluation: run a core program on abstract values.

Every expression evaluates to an abstract value whose flags and
definedness are formulas over the unknowns.  Pattern matches become
``merge`` of the branch results, selected by the discriminant's flags.
Function calls are memoised on the identity of their (interned)
argument values.
"""

import sys

from .domain import BOTTOM_VALUE, AbstractStore
from .errors import CompilationLimitExceeded, EvaluationError
from .formula import FALSE, TRUE
from .frontend.syntax import Call, Case, Con, Let, Var

DEFAULT_NODE_LIMIT = 10**8


class EvalStats:
    def __init__(self):
        self.calls = 0
        self.memo_hits = 0
        self.memo_misses = 0
        self.merges = 0

    def as_dict(self):
        return dict(self.__dict__)


class AbstractEvaluator:
    def __init__(self, core, store, memo=True, node_limit=DEFAULT_NODE_LIMIT):
        self.core = core
        self.store = store
        self.circuit = store.circuit
        self.use_memo = memo
        self.memo = {}
        self.node_limit = node_limit
        self.stats = EvalStats()
        self._merge_cache = {}

    # -- expressions --------------------------------------------------------

    def eval(self, e, env):
        if isinstance(e, Var):
            try:
                return env[e.name]
            except KeyError:
                raise EvaluationError(f"unbound variable {e.name}") from None
        if isinstance(e, Let):
            a = self.eval(e.bound, env)
            if a.defined == FALSE:
                return BOTTOM_VALUE
            return self.eval(e.body, {**env, e.name: a})
        if isinstance(e, Con):
            return self.construct(e.type, e.con, [self.eval(x, env) for x in e.args])
        if isinstance(e, Call):
            return self.call(e.func, [self.eval(x, env) for x in e.args])
        if isinstance(e, Case):
            return self.case(e, env)
        raise EvaluationError(f"not a core expression: {type(e).__name__}")

    def construct(self, tname, con, args):
        dt = self.core.types[tname]
        c = dt.constructor(con)
        defs = []
        for a in args:
            if a.defined == FALSE:
                return BOTTOM_VALUE
            defs.append(a.defined)
        return self.store.make(self.store.constant(len(dt), c.index + 1), args,
                               self.circuit.mk_and(defs))

    def call(self, fname, args):
        self.stats.calls += 1
        for a in args:
            if a.defined == FALSE:
                return BOTTOM_VALUE
        key = (fname, tuple(args))
        if self.use_memo:
            hit = self.memo.get(key)
            if hit is not None:
                self.stats.memo_hits += 1
                return hit
            self.stats.memo_misses += 1
        if self.circuit.num_nodes > self.node_limit:
            raise CompilationLimitExceeded(
                f"formula exceeds {self.node_limit} nodes; the constraint is too large "
                "(or a recursion does not descend on the unknown)")
        f = self.core.functions[fname]
        r = self.eval(f.body, dict(zip(f.params, args)))
        # strict call: an undefined argument makes the call undefined
        d = self.circuit.mk_and([r.defined] + [a.defined for a in args])
        r = self.store.with_defined(r, d)
        if self.use_memo:
            self.memo[key] = r
        return r

    def case(self, e, env):
        x = self.eval(e.scrut, env)
        if x.defined == FALSE:
            return BOTTOM_VALUE
        dt = self.core.types[e.type]
        c = len(dt)
        sels = self.store.selectors(x.flags, c)
        results = []
        for k, (br, con) in enumerate(zip(e.branches, dt.constructors)):
            if sels[k] == FALSE:
                results.append(None)
                continue
            benv = dict(env)
            for j, v in enumerate(br.vars):
                benv[v] = x.args[j] if j < len(x.args) else BOTTOM_VALUE
            results.append(self.eval(br.body, benv))
        return self.merge(x.flags, x.defined, c, results, sels)

    # -- merge ------------------------------------------------------------------

    def merge(self, sel_flags, sel_def, c, branches, sels=None):
        """Select among ``branches`` by the constructor number in ``sel_flags``.

        A ``None`` branch is one whose selector is constant false.  Branch
        values must be normalised (defined implies decodable), which holds
        for everything built by evaluation and by the allocators.
        """
        if c < 1 or len(branches) != c:
            raise EvaluationError("merge needs one branch per constructor")
        if sels is None:
            sels = self.store.selectors(sel_flags, c)
        self.stats.merges += 1
        valid = self.store.valid_selection(sel_flags, c, sels)
        inner = self._merge(tuple(sels), tuple(branches))
        d = self.circuit.mk_and([sel_def, valid, inner.defined])
        return self.store.with_defined(inner, d) if inner is not BOTTOM_VALUE else BOTTOM_VALUE

    def _merge(self, sels, items):
        """Merge without the selector's own definedness.

        Definedness is the conjunction of ``sel_k => defined(item_k)``; a
        missing item counts as undefined.
        """
        key = (sels, tuple(map(id, items)))
        hit = self._merge_cache.get(key) if self.use_memo else None
        if hit is not None:
            return hit[0]
        mk_and, mk_or = self.circuit.mk_and, self.circuit.mk_or
        live = []
        dparts = []
        for s, a in zip(sels, items):
            if s == FALSE:
                continue
            if a is None or a.defined == FALSE:
                dparts.append(-s)
            else:
                live.append((s, a))
                if a.defined != TRUE:
                    dparts.append(mk_or([-s, a.defined]))
        defined = mk_and(dparts)
        if not live or defined == FALSE:
            out = BOTTOM_VALUE
        elif all(a is live[0][1] for _, a in live):
            a = live[0][1]
            out = self.store.make(a.flags, a.args, defined)
        else:
            nflags = max(len(a.flags) for _, a in live)
            flags = []
            for i in range(nflags):
                groups = {}
                for s, a in live:
                    if i < len(a.flags):
                        groups.setdefault(a.flags[i], []).append(s)
                if len(groups) == 1:
                    flags.append(next(iter(groups)))
                else:
                    flags.append(mk_and([mk_or([-mk_or(ss), f]) for f, ss in groups.items()]))
            nargs = max(len(a.args) for _, a in live)
            args = []
            for j in range(nargs):
                sub = tuple(a.args[j] if j < len(a.args) else None for _, a in live)
                args.append(self._merge(tuple(s for s, _ in live), sub))
            out = self.store.make(flags, args, defined)
        if self.use_memo:
            self._merge_cache[key] = (out, items)  # keep items alive so ids stay valid
        return out


def evaluate_main(core, store, param, unknown, memo=True, node_limit=DEFAULT_NODE_LIMIT):
    """Abstract value of ``main param unknown`` and the evaluator used."""
    ev = AbstractEvaluator(core, store, memo=memo, node_limit=node_limit)
    main = core.main_function
    result = deep_call(lambda: ev.call(main.name, [param, unknown]))
    return result, ev


def deep_call(fn, stack_mb=512, recursion=200000):
    """Run ``fn`` in a thread with a big stack so deep recursion is safe."""
    import threading

    out = {}

    def run():
        try:
            out["value"] = fn()
        except BaseException as exc:  # re-raised in the caller
            out["error"] = exc

    old_limit = sys.getrecursionlimit()
    old_size = threading.stack_size()
    sys.setrecursionlimit(max(old_limit, recursion))
    threading.stack_size(stack_mb * 1024 * 1024)
    try:
        t = threading.Thread(target=run)
        t.start()
        t.join()
    finally:
        threading.stack_size(old_size)
        sys.setrecursionlimit(old_limit)
    if "error" in out:
        raise out["error"]
    return out["value"]


__all__ = ["AbstractEvaluator", "AbstractStore", "evaluate_main", "deep_call", "BOTTOM_VALUE"]
