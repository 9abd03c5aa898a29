from .dimacs import CnfProblem, check_model, dimacs_text, read_dimacs, write_dimacs
from .external import default_solver_command, solve_external
from .internal import solve_internal
from .result import SolveResult

__all__ = [
    "CnfProblem", "SolveResult", "check_model", "default_solver_command", "dimacs_text",
    "read_dimacs", "solve_external", "solve_internal", "write_dimacs",
]
