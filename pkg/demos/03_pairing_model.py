# %% [markdown]
# # The pairing model
#
# Cut each row sum s_i into s_i points and each column sum likewise, then
# match row points to column points at random.  Counting the pairs between
# each row cell and column cell gives a table.

# %%
from collections import Counter

from tablecount import validate_margins
from tablecount.pairing import (class_probabilities, doublet_moments, enumerate_pairings,
                                exhaustive_class_probabilities, exhaustive_doublet_moments,
                                no_parallel_fraction, pairing_to_matrix, verify_weight_identity)

mp = validate_margins([2, 1], [2, 1])
print(Counter(pairing_to_matrix(p).entries for p in enumerate_pairings(mp)))

# %% [markdown]
# Tables are not equally likely.  Weighting each pairing by the product of
# r! over its entries undoes the bias exactly.

# %%
for rows, cols in [([2, 1], [2, 1]), ([2, 2], [2, 2]), ([3, 2, 1], [2, 2, 2])]:
    m = validate_margins(rows, cols)
    print(rows, cols, "all:", verify_weight_identity(m, lambda a: True),
          "0-1:", verify_weight_identity(m, lambda a: not a))

# %% [markdown]
# ## Doublets
#
# A doublet is a pair of parallel pairs.  Its expected count has a closed
# form, checked here against full enumeration.

# %%
mp = validate_margins([2, 2, 2], [3, 3])
print(doublet_moments(mp).b[:3])
print(exhaustive_doublet_moments(mp)[:3])

# %% [markdown]
# The probability of no doublet at all, for rows and columns of 2 with
# S = 40.  The closed form is the inclusion-exclusion sum cut after two
# terms, so it is an upper bound and overshoots by roughly the size of the
# next term.

# %%
mp = validate_margins([2] * 20, [2] * 20)
frac, se = no_parallel_fraction(mp, samples=100_000, seed=0)
b = doublet_moments(mp)
print("simulated:", round(frac, 5), "+/-", round(se, 5))
print("1 - b1 + b2:", float(class_probabilities(mp).p[0]))
print("1 - b1:", float(1 - b.get(1)))

# %%
small = validate_margins([2, 2], [2, 2])
print(class_probabilities(small).p[0], exhaustive_class_probabilities(small)[0])
