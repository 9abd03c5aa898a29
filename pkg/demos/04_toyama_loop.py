# %% [markdown]
# # A looping derivation
#
# The rewrite system
#
#     f(a, b, x) -> f(x, x, x)
#     f(x, y, c) -> x
#     f(x, y, c) -> y
#
# does not terminate.  The program `toyama.co4` checks that a candidate
# derivation t0 -> t1 -> ... -> tn is made of valid rewrite steps and
# that tn contains an instance of t0.  The solver searches for one with
# three steps over terms of depth two.

# %%
import logging

from co4.pipeline import ProblemSpec, run_pipeline
from co4.programs import path as program_path

logging.basicConfig(level=logging.INFO, format="  %(message)s")

trs = open(program_path("toyama_trs.txt")).read()
spec = ProblemSpec(program=program_path("toyama.co4"), param=trs,
                   alloc="Looping_Derivation{List_Step=3, Term=2, List_Pos=2, List_Pair_Name_Term=2}")
res = run_pipeline(spec)

# %% [markdown]
# Print the steps one per line.

# %%
derivation, pos, sub = res.solution.args
step = derivation
while step.con == "Cons":
    t0, rule, p, sb, t1 = step.args[0].args
    print(f"{t0}\n   --[{rule} at {p}]-->")
    last = t1
    step = step.args[1]
print(last)
print("position of the repeated instance:", pos, " substitution:", sub)
print("stats:", {k: res.stats[k] for k in ("variables", "clauses", "solve_seconds")})
