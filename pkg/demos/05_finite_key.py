# %% [markdown]
# # Finite data
#
# Every observed gain is widened by five standard deviations for `N` pulse
# pairs per intensity cell, and the intensities are re-optimized.

# %%
import math

from mdiqkd import ChannelParams, FluctuationConfig, ScanGrid, optimize_intensities
from mdiqkd.finite_key import failure_probability

print(f"n_alpha = 5 -> failure probability {failure_probability(5):.3e}")
grid = ScanGrid(0.02, 0.6, 0.02)

# %%
for eta in (0.1, 0.05):
    p = ChannelParams().with_eta(eta)
    print(f"eta = {eta}")
    for N in (1e11, 1e12, 1e13, 1e14, math.inf):
        pt = optimize_intensities(p, grid, FluctuationConfig(5.0, N))
        print(f"  N = {N:8.0e}  mu2 = {pt.alice.mu2:.2f}  mu1 = {pt.alice.mu1:.2f}  R = {pt.R:.4e}")
