# %% [markdown]
# # Why memoised calls matter
#
# `subword eq xs ys` recurses on `ys` twice per step, once in each
# branch of a match on an unknown.  Evaluated on abstract values, both
# branches always run.  Without a cache the work doubles at every level
# of `ys`.  With calls cached on their (shared) arguments it stays
# polynomial.

# %%
import numpy as np

from co4.pipeline import ProblemSpec, build_constraint
from co4.programs import path as program_path


def gates(n, memo):
    spec = ProblemSpec(program=program_path("subword.co4"), param="False",
                       alloc=f"Pair_List_E_List_E{{default={n}}}", memo=memo)
    return build_constraint(spec)["stats"]["gates_built"]


# %%
lengths = np.array([2, 4, 6, 8, 10, 12])
with_memo = np.array([gates(n, True) for n in lengths])
without = np.array([gates(n, False) if n <= 8 else -1 for n in lengths])
print(" n   memo   no memo")
for n, a, b in zip(lengths, with_memo, without):
    print(f"{n:2d} {a:6d} {b:9d}" if b >= 0 else f"{n:2d} {a:6d}         -")

# %% [markdown]
# A log-log fit gives the growth exponent of the memoised sizes; the
# unmemoised sizes grow by a near-constant factor per step instead.

# %%
slope = np.polyfit(np.log(lengths), np.log(with_memo), 1)[0]
print(f"memoised size grows like n^{slope:.2f}")
ok = without[without > 0]
print("unmemoised growth per +2:", np.round(ok[1:] / ok[:-1], 1))
