# %% [markdown]
# # Counting tables exactly
#
# How many 4 x 4 tables of nonnegative integers have every row and column
# summing to 3?  Small enough to list them one by one, which gives an
# independent check on the dynamic program.

# %%
from tablecount import EntryAlphabet, TableCounter, count_bruteforce, count_exact, validate_margins

square = validate_margins([3] * 4, [3] * 4)
print("dynamic program:", count_exact(square))
print("brute force:    ", count_bruteforce(square))

# %% [markdown]
# Restricting the entries changes the class.  The 0-1 tables with these
# margins are exactly the complements of the 24 permutation matrices.

# %%
for allowed in ("0,1", "0,1,3", "0,1,2,3", "all"):
    print(f"{allowed:>8}: {count_exact(square, EntryAlphabet.parse(allowed))}")

# %% [markdown]
# The DP state is the sorted multiset of residual row sums, so it scales far
# past anything enumerable.  Counts are plain Python ints.

# %%
big = validate_margins([2] * 16, [2] * 16)
counter = TableCounter(big)
print(counter.count())
print("memo states:", counter.states_visited)

# %% [markdown]
# ## Uniform samples
#
# Walking the same DP with probabilities proportional to downstream counts
# gives exact uniform samples.

# %%
import random
from collections import Counter

small = TableCounter(validate_margins([2, 2], [2, 2]))
rng = random.Random(0)
freq = Counter(small.sample(rng).entries for _ in range(30000))
for table, c in sorted(freq.items()):
    print(table, round(c / 30000, 4))
