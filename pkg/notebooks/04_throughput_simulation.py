# %% [markdown]
# # Link-level throughput
#
# 255 subcarriers, three users, BPSK, block fading.  The count of
# correctly decoded packets per channel use is compared with a single
# user occupying every subcarrier.  Trial counts here are small so the
# script runs in seconds; `ia-ofdm reproduce fig6` runs the full presets.

# %%
import os

from ia_ofdm.channel import Uniform
from ia_ofdm.simulator import SimConfig, run_sweep

TRIALS = int(os.environ.get("NB_TRIALS", "40"))
grid = (0.0, 20.0, 40.0, 60.0, 78.0, 100.0)

# %% [markdown]
# ## Small channel variance

# %%
small = Uniform(0.9, 1.0)
schemes = [("single user", dict(scheme="single_user")), ("IA n=1", dict(n=1)), ("IA n=2", dict(n=2)),
           ("IA n=1 M=2", dict(n=1, M=2)), ("IA n=1 M=3", dict(n=1, M=3))]
print("SNR dB      " + "".join(f"{s:>9.0f}" for s in grid))
for label, kw in schemes:
    res = run_sweep(SimConfig(dist=small, trials=TRIALS, snr_db_grid=grid, **kw))
    print(f"{label:12s}" + "".join(f"{m:9.1f}" for m in res.mean))

# %% [markdown]
# `n = 2` trails `n = 1` over most of the SNR range even though it has a
# higher ceiling: the larger power spread of the Krylov columns costs
# more than the extra packets bring in.

# %% [markdown]
# ## Which precoders the power test sees
# The transmitted precoders are column-normalised, which caps their
# power spread.  Testing the raw Krylov precoders instead reproduces the
# analytical outage regime, where most MIMO groups are discarded.

# %%
for check in ("transmitted", "raw"):
    for M in (1, 2):
        res = run_sweep(SimConfig(M=M, dist=small, trials=TRIALS, snr_db_grid=(100.0,), power_check=check))
        print(f"{check:11s} M={M}: plateau {res.mean[0]:7.1f}  group outage {res.outage_frac:.3f}")
