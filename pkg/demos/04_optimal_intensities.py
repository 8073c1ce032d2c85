# %% [markdown]
# # Optimal intensities and key rate versus transmission
#
# For each per-arm transmission the signal and decoy intensities are searched
# on a grid (symmetric parties), once with the vacuum+weak bounds and once
# with the exact single-photon values.  A coarse 0.02 step keeps this quick;
# the CLI `mdiqkd optimize` runs the 0.01 grid.

# %%
from mdiqkd import ChannelParams, ScanGrid, scan_transmission

records = scan_transmission(ChannelParams(), [0.5, 0.2, 0.1, 0.05, 0.02, 0.01],
                            ScanGrid(0.02, 0.6, 0.02))
print(f"{'eta':>6} {'method':>12} {'mu2':>5} {'mu1':>5} {'R':>11}")
for r in records:
    pt = r.point
    print(f"{r.eta:6.2f} {r.method:>12} {pt.alice.mu2:5.2f} {pt.alice.mu1:5.2f} {pt.R:11.4e}")
