# %% [markdown]
# # Asymptotic estimates against exact counts
#
# All estimators work in log space and carry the error order s^3 t^3 / S^2,
# where s and t are the largest row and column sums.

# %%
import math

from tablecount import (EntryAlphabet, SemiregularSpec, count_exact, delta_from_count,
                        estimate_01, estimate_main, estimate_near_regular, estimate_restricted,
                        validate_margins)
from tablecount.report import convergence_report

# %% [markdown]
# Rows and columns all equal to 2, growing size.  The log error of the main
# formula should shrink roughly like 64 / S^2.

# %%
for row in convergence_report(2, 2, [4, 8, 16]):
    print(f"{row.label:<16} S={row.S:<3} |log err|={row.abs_log_error:.6f} "
          f"order={row.predicted_order:.4f} ratio={row.error_ratio:.3f}")

# %% [markdown]
# The near-regular form keeps only the leading correction, so it is visibly
# worse on the same inputs.

# %%
for k in (8, 16):
    mp = validate_margins([2] * k, [2] * k)
    exact = math.log(count_exact(mp))
    print(k, abs(estimate_main(mp).log_value - exact), abs(estimate_near_regular(mp).log_value - exact))

# %% [markdown]
# ## The residual exponent of the semiregular formula
#
# Feeding exact counts back through the semiregular formula gives the
# residual Delta.  It should sit in (0, 2) and drift toward 5(s+t)/(6st).

# %%
for size in (8, 12, 16):
    spec = SemiregularSpec(size, 2, size, 2)
    delta, limit = delta_from_count(spec, math.log(count_exact(spec.margins())))
    print(size, round(delta, 4), "limit", round(limit, 4))

# %% [markdown]
# ## Restricted entries
#
# Tables whose entries avoid 2 but may be 3.  Using the right indicators
# matters a lot; pretending 2 is allowed is off by more than a factor of e.

# %%
mp = validate_margins([2] * 8, [2] * 8)
j013 = EntryAlphabet.parse("0,1,3")
exact = math.log(count_exact(mp, j013))
print("restricted:", abs(estimate_restricted(mp, j013).log_value - exact))
print("main:      ", abs(estimate_main(mp).log_value - exact))
print("0-1:       ", abs(estimate_01(mp).log_value - exact))
