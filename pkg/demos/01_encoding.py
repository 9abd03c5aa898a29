# %% [markdown]
# # Encoding data as formulas
#
# A value of an algebraic data type becomes a tree of boolean flags.
# The flags at a node pick the constructor through a prefix code, and
# each argument has its own subtree.  An *allocator* is such a tree made
# of fresh variables; every assignment to them decodes to a value.

# %%
from co4.domain import AbstractStore, decode, prefix_code, unknown_variables
from co4.formula import Assignment, Circuit
from co4.frontend import compile_program
from co4.values import is_total

# %% [markdown]
# Prefix codes for two, three and five constructors.

# %%
for n in (2, 3, 5):
    print(n, ["".join(map(str, w)) for w in prefix_code(n)])

# %% [markdown]
# Some types to play with.  Only types reachable from `main` are kept, so
# `main` takes a record holding all of them.

# %%
src = """
data Ordering = LT | EQ | GT
data Either a b = Left a | Right b
data N = Z | S N
data All = All (Either Bool Ordering) N
main :: Bool -> All -> Bool
main k u = k
"""
core = compile_program(src)
circuit = Circuit()
store = AbstractStore(circuit, core.types)

# %% [markdown]
# A complete allocator for `Either Bool Ordering`: one flag at the top
# and two below it.  All eight assignments decode to one of five values.

# %%
a = store.complete_allocator("Either_Bool_Ordering")
print("allocator:", a)
xs = sorted(unknown_variables(circuit, a))
seen = {}
for bits in range(1 << len(xs)):
    sigma = Assignment({x: bool(bits >> i & 1) for i, x in enumerate(xs)})
    v = decode(core.types, circuit, "Either_Bool_Ordering", a, sigma)
    seen.setdefault(str(v), []).append(bits)
for v, hits in seen.items():
    print(f"{v:12} <- {hits}")

# %% [markdown]
# Recursive types need a bound.  Up to depth 3 the naturals allocator
# yields Z to S (S (S Z)); assignments that would need a deeper value
# decode to a partial term containing ⊥.

# %%
n = store.bounded_allocator("N", 3)
xs = sorted(unknown_variables(circuit, n))
values = set()
for bits in range(1 << len(xs)):
    sigma = Assignment({x: bool(bits >> i & 1) for i, x in enumerate(xs)})
    values.add(decode(core.types, circuit, "N", n, sigma))
for v in sorted(values, key=str):
    print(v, "" if is_total(v) else "(partial)")
