# %% [markdown]
# # The Eve-absent channel model
#
# Gains `Q` and error rates `E = EQ / Q` of a symmetric MDI-QKD link for
# each pair of pulse intensities, in both bases.

# %%
import numpy as np

from mdiqkd import ChannelParams, IntensityTriple, bessel_i0, build_gain_table, gains_x, gains_z

p = ChannelParams(e_d=0.015, P_d=3e-6, eta_a=0.1, eta_b=0.1, f=1.16)
print(p)

# %% [markdown]
# The x-basis gain involves `I0`, evaluated by its power series.

# %%
for x in (0.0, 0.01, 0.1, 0.5):
    print(f"I0({x}) = {bessel_i0(x):.16f}")

# %% [markdown]
# Gains along the diagonal `mu = nu`.  The z-basis error sits near the
# misalignment `e_d`; the x basis carries the intrinsic coherent-state
# background, and with a vacuum on either side it is exactly 1/2.

# %%
print(f"{'mu':>6} {'Q_z':>11} {'E_z':>8} {'Q_x':>11} {'E_x':>8}")
for mu in (0.01, 0.05, 0.1, 0.2, 0.36, 0.6):
    gz, gx = gains_z(p, mu, mu), gains_x(p, mu, mu)
    print(f"{mu:6.2f} {gz.Q:11.4e} {gz.E:8.4f} {gx.Q:11.4e} {gx.E:8.4f}")
print("E_x with Bob on vacuum:", gains_x(p, 0.36, 0.0).E)

# %% [markdown]
# The full 3 x 3 table both parties would observe.

# %%
a = IntensityTriple(0.01, 0.36)
table = build_gain_table(p, a, a)
np.set_printoptions(precision=4)
print("Q_z =\n", table.Q["z"])
print("Q_x =\n", table.Q["x"])
