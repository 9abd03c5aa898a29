"""CNF problems and the DIMACS exchange format."""

from array import array

import numpy as np

from ..formula import Assignment


class CnfProblem:
    """Clauses over variables 1..num_vars, stored flat with 0 terminators."""

    def __init__(self, num_vars=0, flat=None, num_clauses=None):
        self.num_vars = num_vars
        self.flat = array("i") if flat is None else flat
        if num_clauses is None:
            num_clauses = sum(1 for x in self.flat if x == 0)
        self.num_clauses = num_clauses

    @classmethod
    def from_clauses(cls, clauses, num_vars=None):
        p = cls()
        for c in clauses:
            p.add_clause(c)
        if num_vars is not None:
            p.num_vars = max(p.num_vars, num_vars)
        return p

    @classmethod
    def from_builder(cls, builder):
        return cls(builder.num_vars, builder.flat, builder.num_clauses)

    def add_clause(self, lits):
        lits = list(lits)
        for lit in lits:
            if lit == 0:
                raise ValueError("0 is not a literal")
            self.num_vars = max(self.num_vars, abs(lit))
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

    def used_variables(self):
        lits = np.frombuffer(self.flat, dtype=np.int32) if len(self.flat) else np.zeros(0, np.int32)
        v = np.unique(np.abs(lits))
        return [int(x) for x in v if x]


def write_dimacs(p, sink, chunk=1 << 16):
    """Write ``p`` to a text sink: header, then one zero-terminated clause per line."""
    sink.write(f"p cnf {p.num_vars} {p.num_clauses}\n")
    flat = p.flat
    for start in range(0, len(flat), chunk):
        sink.write("".join(f"{x}\n" if x == 0 else f"{x} " for x in flat[start:start + chunk]))


def dimacs_text(p):
    import io

    buf = io.StringIO()
    write_dimacs(p, buf)
    return buf.getvalue()


def read_dimacs(text):
    """Parse DIMACS text (comments allowed) into a :class:`CnfProblem`."""
    num_vars = None
    flat = array("i")
    count = 0
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line: {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            x = int(tok)
            flat.append(x)
            if x == 0:
                count += 1
    if flat and flat[-1] != 0:
        flat.append(0)
        count += 1
    p = CnfProblem(0, flat, count)
    p.num_vars = max([num_vars or 0] + [abs(x) for x in flat])
    return p


def check_model(p, assignment):
    """True iff ``assignment`` (var -> bool, missing = False) satisfies every clause."""
    if p.num_clauses == 0:
        return True
    flat = np.frombuffer(p.flat, dtype=np.int32)
    values = np.zeros(p.num_vars + 1, dtype=bool)
    items = assignment._values.items() if isinstance(assignment, Assignment) else assignment.items()
    for v, b in items:
        if 0 < v <= p.num_vars and b:
            values[v] = True
    ends = np.flatnonzero(flat == 0)
    starts = np.concatenate(([0], ends[:-1] + 1))
    if np.any(starts == ends):  # empty clause
        return False
    truth = values[np.abs(flat)] == (flat > 0)
    truth[ends] = False
    sat = np.logical_or.reduceat(truth, starts)
    return bool(sat.all())
