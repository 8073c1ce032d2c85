# %% [markdown]
# # Decoy bounds against a planted yield matrix
#
# Draw a random yield matrix, generate the gains a vacuum+weak protocol would
# see, and compare the closed-form bounds with the planted single-photon
# values.  The lower bound must never exceed the truth, the error bound
# must never fall below it.

# %%
import numpy as np

from mdiqkd import GainTable, IntensityTriple, abc_alpha, estimate_bounds, gain_from_yields
from mdiqkd.oracle import exact_y11_e11, random_yield_matrix

rng = np.random.default_rng(7)
alice = IntensityTriple(0.05, 0.4)
bob = IntensityTriple(0.08, 0.3)
print("a, b, c, alpha =", abc_alpha(alice, bob))

# %%
print(f"{'trial':>5} {'Y11':>10} {'Y11_lo':>10} {'e11':>8} {'e11_hi':>8}")
for trial in range(8):
    ym = random_yield_matrix(rng)
    points = {(i, j, b): gain_from_yields(ym, alice[i], bob[j])
              for i in range(3) for j in range(3) for b in ("x", "z")}
    res = estimate_bounds(GainTable.from_points(alice, bob, points))
    Y, e = exact_y11_e11(ym)
    print(f"{trial:5d} {Y:10.3e} {res.y11_lower['z']:10.3e} {e:8.4f} {res.e11_upper['z']:8.4f}")
