# %% [markdown]
# # Power-ratio outage
#
# A group is unusable when the largest per-subcarrier transmit power
# exceeds the smallest by more than `10**a`.  Modelling the diagonal
# entries of `T` as i.i.d. draws turns this into a question about the
# spread `max/min` of `(2n+1)M` samples.

# %%
import numpy as np

from ia_ofdm.channel import Rayleigh, Uniform
from ia_ofdm.outage import OutageQuery, gamma_max, outage_curve, outage_mc, outage_quadrature, outage_uniform

# %% [markdown]
# ## Closed form for Uniform(0, 1)

# %%
for n, M in [(1, 1), (2, 1), (3, 1), (1, 2), (1, 3), (2, 2)]:
    print(f"n={n} M={M}: gamma_max={gamma_max(n, M, 3):7.3f}  P_out={outage_uniform(n, M, 3).p_outage:.4f}")

# %% [markdown]
# ## Quadrature and Monte Carlo
# The Rayleigh case has no closed form.  Two-dimensional quadrature over
# the joint density of (min, max) is checked against simulation.

# %%
for n, M in [(1, 1), (2, 1), (1, 2)]:
    q = OutageQuery(n, M, 3.0, Rayleigh())
    quad = outage_quadrature(q)
    mc = outage_mc(q, trials=200_000, seed=1)
    print(f"n={n} M={M}: quadrature {quad.p_outage:.4f}   MC {mc.p_outage:.4f} +- {mc.stderr:.4f}")

# %% [markdown]
# ## How good is the i.i.d. approximation?
# Each `t` is really a ratio of six channel gains.  Drawing those gains
# directly changes the picture noticeably for Uniform(0, 1) gains.

# %%
for n in (1, 2):
    q = OutageQuery(n, 1, 3.0, Uniform())
    approx = outage_uniform(n, 1, 3).p_outage
    emp = outage_mc(q, trials=200_000, seed=2, empirical=True).p_outage
    print(f"n={n}: modelled {approx:.4f}   six-gain ratio {emp:.4f}")

# %% [markdown]
# ## Curve data
# The same rows the CLI writes with `reproduce fig2`.

# %%
for dist in (Uniform(), Rayleigh()):
    rows = outage_curve(dist, sweep="n", values=range(1, 7))
    print(dist, np.round([r["p"] for r in rows], 4))
