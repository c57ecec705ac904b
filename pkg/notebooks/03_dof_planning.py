# %% [markdown]
# # How many subcarriers per group?
#
# With `K` users and extension `n`, alignment needs `(n+1)^q + n^q`
# subcarriers and delivers `(n+1)^q + (K-1) n^q` packets, where
# `q = (K-1)(K-2) - 1`.  The exponent grows quadratically in `K`, so the
# feasible set under any realistic budget is tiny.

# %%
from ia_ofdm.dof_planner import DofRow, enumerate_feasible, format_table, practical_dof, table_one

print(format_table(table_one()))

# %% [markdown]
# ## Budget-limited optimum
# Without the power constraint the best choice is always three users
# with the largest `n` that fits.

# %%
for nmax in (33, 275, 2001, 4148):
    b = enumerate_feasible(nmax).best
    print(f"N_max={nmax:5d}: K={b.K} n={b.n:5d} dof={b.dof:.4f}")

print("six users need", DofRow(6, 1).subcarriers, "subcarriers even at n = 1")

# %% [markdown]
# ## With the power constraint
# Admitting only extensions whose outage probability stays below 10 %
# leaves `n = 1` at `a = 3`; loosening the constraint admits more.

# %%
for a in (3, 6, 10, 30):
    r = practical_dof(4148, a=a)
    print(f"a={a:2d}: n={r.n:3d} dof={r.dof:.4f}")
