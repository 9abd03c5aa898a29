# %% [markdown]
# # Solving a constraint program
#
# A constraint is a program `main :: K -> U -> Bool`.  Given the
# parameter of type `K`, the solver looks for an unknown of type `U`
# that makes `main` return True.  Here `main k u = eqN (double u) k`,
# so it halves a number.

# %%
import logging

from co4.pipeline import ProblemSpec, run_pipeline
from co4.programs import path as program_path

logging.basicConfig(level=logging.INFO, format="  %(message)s")

# %%
spec = ProblemSpec(program=program_path("double.co4"), param="S (S (S (S (S (S Z)))))",
                   alloc="N{default=4}")
res = run_pipeline(spec)
print("status:", res.status)
print("solution:", res.solution)

# %% [markdown]
# An odd number has no half.  The answer is an honest "no solution",
# not a wrong value.

# %%
res = run_pipeline(ProblemSpec(program=program_path("double.co4"), param="S (S (S Z))",
                               alloc="N{default=4}"))
print("status:", res.status)

# %% [markdown]
# The same flow from the shell:
#
#     co4 solve src/co4/programs/double.co4 --param-term "S (S Z)" --alloc "N{3}" --stats
