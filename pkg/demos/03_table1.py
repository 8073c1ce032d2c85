# %% [markdown]
# # The comparison point at eta = 0.1
#
# Signal intensity 0.36 for both parties, decoy searched on the 0.01 grid.

# %%
from mdiqkd import ChannelParams, ScanGrid, infinite_decoy_baseline, optimize_intensities

p = ChannelParams(e_d=0.015, P_d=3e-6, eta_a=0.1, eta_b=0.1, f=1.16)
pt = optimize_intensities(p, ScanGrid(0.01, 0.6, 0.01), signal=0.36)
print(f"decoy mu1 = nu1 = {pt.alice.mu1}")
print(f"Y11^z lower bound  {pt.y11_z:.4e}   (published 4.1967e-3)")
print(f"e11^x upper bound  {100 * pt.e11_x:.4f}%  (published 2.7241%)")
print(f"key rate R         {pt.R:.4e}   (published 1.3548e-4)")

# %% [markdown]
# What infinitely many decoys would reveal about the same channel.

# %%
y_z, _ = infinite_decoy_baseline(p, "z")
_, e_x = infinite_decoy_baseline(p, "x")
print(f"exact Y11^z = {y_z:.4e}, exact e11^x = {100 * e_x:.4f}%")
