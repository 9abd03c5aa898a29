"""Minimal solver executable: ``python -m co4.sat.driver FILE.cnf``.

Reads DIMACS, solves with the CaDiCaL binding from python-sat and
prints a competition-style answer.  Used when no solver binary is on
the PATH.
"""

import sys

from pysat.formula import CNF
from pysat.solvers import Solver


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: python -m co4.sat.driver FILE.cnf", file=sys.stderr)
        return 2
    cnf = CNF(from_file=argv[0])
    with Solver(name="cadical153", bootstrap_with=cnf.clauses) as s:
        sat = s.solve()
        out = sys.stdout
        if not sat:
            out.write("s UNSATISFIABLE\n")
            return 20
        out.write("s SATISFIABLE\n")
        model = s.get_model() or []
        for i in range(0, len(model), 20):
            out.write("v " + " ".join(map(str, model[i:i + 20])) + "\n")
        out.write("v 0\n")
    return 10


if __name__ == "__main__":
    sys.exit(main())
