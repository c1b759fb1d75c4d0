# %% [markdown]
# # Switchings
#
# A D-switching removes an entry equal to D by spreading it along a
# border of zeros, keeping every margin.  Indices are 0-based.

# %%
from tablecount import TableMatrix
from tablecount.switching import (BoundSpec, SwitchingSite, apply_reverse_switching, apply_switching,
                                  count_reverse_switchings, count_switchings, enumerate_switchings,
                                  summation_bounds, switching_bounds, useful_inequality_check)

Q = TableMatrix.from_entries([[2, 0, 0], [0, 1, 0], [0, 0, 1]])
site = SwitchingSite(2, ((0, 0), (1, 1), (2, 2)))
R = apply_switching(Q, site)
print(R.entries)
print(apply_reverse_switching(R, site) == Q)
print([s.positions for s in enumerate_switchings(Q, 2)])

# %% [markdown]
# Exact site counts against the simple bounds, on a sparse random table.

# %%
import numpy as np

rng = np.random.default_rng(3)
q = np.zeros((16, 16), dtype=int)
q[np.arange(16), rng.permutation(16)] = 1
q[0, np.nonzero(q[0])[0][0]] = 2
T = TableMatrix.from_entries(q)
lower, upper = switching_bounds(T, 2)
print("forward", count_switchings(T, 2), ">=", lower)
print("reverse", count_reverse_switchings(T, 2), "<=", upper)

# %% [markdown]
# ## Two helper inequalities
#
# A falling product against (n/e)^k, and brackets for the sum of a sequence
# given by a ratio recurrence.  With constant ratio A/i the sum is a
# truncated exponential series.

# %%
print(useful_inequality_check(4, 2, 2))
N, A = 40, 2.0
res = summation_bounds(BoundSpec(N=N, A=[A] * N, B=[0.0] * N, variant="lemma7", c_hat=0.1))
print(res)
