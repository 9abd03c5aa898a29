"""Built-in solvers for small problems and tests.

Exhaustive enumeration (vectorised with numpy) for problems that use at
most ``exhaustive_limit`` variables, and a plain DPLL with two watched
literals for anything larger.  Neither is meant to compete with a real
CDCL solver.
"""

import time

import numpy as np

from ..errors import SolverError
from ..formula import Assignment
from .result import SolveResult

EXHAUSTIVE_LIMIT = 24


def solve_internal(problem, mode="auto", exhaustive_limit=EXHAUSTIVE_LIMIT):
    """Decide ``problem``; ``mode`` is 'auto', 'exhaustive' or 'dpll'."""
    t0 = time.perf_counter()
    used = problem.used_variables()
    if mode == "exhaustive" or (mode == "auto" and len(used) <= exhaustive_limit):
        if len(used) > exhaustive_limit:
            raise SolverError(f"exhaustive search bound exceeded: {len(used)} variables > {exhaustive_limit}")
        model = _exhaustive(problem, used)
        name = "internal-exhaustive"
    elif mode in ("auto", "dpll"):
        model = _dpll(problem)
        name = "internal-dpll"
    else:
        raise ValueError(f"unknown mode {mode!r}")
    dt = time.perf_counter() - t0
    if model is None:
        return SolveResult(False, None, dt, name)
    return SolveResult(True, Assignment(model, default=False), dt, name)


def _exhaustive(problem, used, chunk_bits=14):
    clauses = list(problem.clauses())
    if any(not c for c in clauses):
        return None
    if not clauses:
        return {}
    index = {v: i for i, v in enumerate(used)}
    lits = [l for c in clauses for l in c]
    cols = np.array([index[abs(l)] for l in lits], dtype=np.int64)
    neg = np.array([l < 0 for l in lits], dtype=bool)
    starts = np.cumsum([0] + [len(c) for c in clauses[:-1]])
    n = len(used)
    total = 1 << n
    step = 1 << min(n, chunk_bits)
    shifts = np.arange(n, dtype=np.int64)
    for base in range(0, total, step):
        idx = np.arange(base, base + step, dtype=np.int64)
        bits = ((idx[:, None] >> shifts[None, :]) & 1).astype(bool)
        truth = bits[:, cols] ^ neg[None, :]
        ok = np.logical_or.reduceat(truth, starts, axis=1).all(axis=1)
        hit = np.flatnonzero(ok)
        if hit.size:
            row = bits[hit[0]]
            return {v: bool(row[i]) for v, i in index.items()}
    return None


def _dpll(problem):
    nv = problem.num_vars
    clauses = []
    units = []
    for c in problem.clauses():
        c = list(dict.fromkeys(c))
        if not c:
            return None
        if any(-l in c for l in c):
            continue
        if len(c) == 1:
            units.append(c[0])
        else:
            clauses.append(c)
    val = [0] * (nv + 1)  # 0 unassigned, 1 true, -1 false
    watches = {}
    for i, c in enumerate(clauses):
        watches.setdefault(c[0], []).append(i)
        watches.setdefault(c[1], []).append(i)
    trail = []
    occ = [0] * (nv + 1)
    for c in clauses:
        for l in c:
            occ[abs(l)] += 1
    order = sorted(range(1, nv + 1), key=lambda v: -occ[v])

    def value(l):
        v = val[abs(l)]
        return v if l > 0 else -v

    def assign(l):
        val[abs(l)] = 1 if l > 0 else -1
        trail.append(l)

    for u in units:
        if value(u) == -1:
            return None
        if value(u) == 0:
            assign(u)
    qhead = 0

    def propagate():
        nonlocal qhead
        while qhead < len(trail):
            lit = trail[qhead]
            qhead += 1
            false_lit = -lit
            ws = watches.get(false_lit)
            if not ws:
                continue
            keep = []
            conflict = False
            i = 0
            while i < len(ws):
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if value(c[0]) == 1:
                    keep.append(ci)
                    continue
                for k in range(2, len(c)):
                    if value(c[k]) != -1:
                        c[1], c[k] = c[k], c[1]
                        watches.setdefault(c[1], []).append(ci)
                        break
                else:
                    keep.append(ci)
                    if value(c[0]) == -1:
                        conflict = True
                        keep.extend(ws[i:])
                        break
                    assign(c[0])
            watches[false_lit] = keep
            if conflict:
                return False
        return True

    decisions = []  # (trail length before decision, literal, flipped)
    while True:
        if not propagate():
            while decisions:
                mark, lit, flipped = decisions.pop()
                for l in trail[mark:]:
                    val[abs(l)] = 0
                del trail[mark:]
                qhead = mark
                if not flipped:
                    decisions.append((mark, -lit, True))
                    assign(-lit)
                    break
            else:
                return None
            continue
        var = next((v for v in order if val[v] == 0), None)
        if var is None:
            return {v: val[v] == 1 for v in range(1, nv + 1)}
        decisions.append((len(trail), -var, False))
        assign(-var)
