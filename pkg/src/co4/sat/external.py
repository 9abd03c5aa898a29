"""Run a SAT solver as a child process on a DIMACS file.

The command is a template; ``{cnf}`` is replaced by the file path, and
the path is appended when the template has no placeholder.  Only the
``s ...`` status line and ``v ...`` model lines of the output matter;
the exit status is ignored.
"""

import os
import shlex
import shutil
import subprocess
import sys
import tempfile
import time

from ..errors import SolverError
from ..formula import Assignment
from .dimacs import check_model, write_dimacs
from .result import SolveResult

ENV_VAR = "CO4_SOLVER"


def default_solver_command():
    cmd = os.environ.get(ENV_VAR)
    if cmd:
        return cmd
    for name in ("kissat", "cadical"):
        if shutil.which(name):
            return f"{name} -q {{cnf}}"
    return f"{shlex.quote(sys.executable)} -m co4.sat.driver {{cnf}}"


def build_argv(command, path):
    argv = shlex.split(command)
    if any("{cnf}" in a for a in argv):
        return [a.replace("{cnf}", path) for a in argv]
    return argv + [path]


def parse_solver_output(text):
    """(satisfiable, literal list) from solver output; raise on garbage."""
    status = None
    lits = []
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("s "):
            word = line[2:].strip()
            if word == "SATISFIABLE":
                status = True
            elif word == "UNSATISFIABLE":
                status = False
            else:
                raise SolverError(f"unknown solver status {word!r}", text)
        elif line.startswith("v ") or line == "v":
            try:
                lits.extend(int(t) for t in line[1:].split())
            except ValueError:
                raise SolverError("malformed model line", text) from None
    if status is None:
        raise SolverError("solver output has no status line", text)
    return status, lits


def solve_external(problem, command=None, timeout=None, cnf_path=None):
    """Solve ``problem`` with an external solver command."""
    command = command or default_solver_command()
    own_file = cnf_path is None
    if own_file:
        fd, cnf_path = tempfile.mkstemp(suffix=".cnf", prefix="co4-")
        os.close(fd)
    try:
        with open(cnf_path, "w") as fh:
            write_dimacs(problem, fh)
        argv = build_argv(command, cnf_path)
        t0 = time.perf_counter()
        try:
            proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
        except FileNotFoundError as exc:
            raise SolverError(f"solver not found: {argv[0]}") from exc
        except subprocess.TimeoutExpired as exc:
            raise SolverError(f"solver timed out after {timeout} s") from exc
        dt = time.perf_counter() - t0
    finally:
        if own_file:
            os.unlink(cnf_path)
    output = proc.stdout
    try:
        sat, lits = parse_solver_output(output)
    except SolverError as exc:
        exc.output = output + proc.stderr
        raise
    if not sat:
        return SolveResult(False, None, dt, command, output)
    model = Assignment.from_literals(lits, default=False)
    if not check_model(problem, model):
        raise SolverError("solver returned a model that violates the formula", output)
    return SolveResult(True, model, dt, command, output)
