from dataclasses import dataclass, field

from ..formula import Assignment


@dataclass
class SolveResult:
    satisfiable: bool
    assignment: Assignment = None
    seconds: float = 0.0
    solver: str = ""
    output: str = field(default="", repr=False)

    @property
    def status(self):
        return "SAT" if self.satisfiable else "UNSAT"
