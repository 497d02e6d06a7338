# %% [markdown]
# One-axis twisting, then cavity feedback with a leaky cavity.
#
# Runs in a couple of seconds. Prints numbers only, no plotting dependency.

# %%
import numpy as np

from cavspin.dynamics import dissipative_oat
from cavspin.metrology import kitagawa_ueda_moments, oat_optimum, oat_optimum_scan

# %% [markdown]
# Closed-form moments for a twisted coherent state of N = 100 atoms.

# %%
N = 100
for t in (0.25, 0.5, 1.0, 2.0):
    vm, vp, sx = kitagawa_ueda_moments(N, 1.0, t)
    print(f"t = {t:4.2f}  V- = {vm:8.3f}  V+ = {vp:9.3f}  <Sx> = {sx:6.2f}  xi2 = {N * vm / sx**2:.4f}")

# %% [markdown]
# Best Wineland parameter versus atom number. The fitted slope sits near -2/3.

# %%
scan = oat_optimum_scan((20, 40, 80, 160))
for n, x in zip(scan.N, scan.xi2_min):
    print(f"N = {int(n):4d}  xi2_min = {x:.4f}")
print("fitted exponent", round(scan.exponent, 3))

# %% [markdown]
# The same twist with finite detuning d: photon loss adds noise to both quadratures.

# %%
t = np.linspace(0.0, 1.0, 5)
for d in (1.0, 10.0, 1e8):
    r = dissipative_oat(1.0, d, N / 2, t)
    print(f"d = {d:8.0e}  Vmin(t=1) = {r.V_min[-1]:7.3f}  Vmax(t=1) = {r.V_max[-1]:7.3f}")

t_opt, xi2 = oat_optimum(N)
print(f"unitary optimum at N = {N}: t = {t_opt:.3f}, xi2 = {xi2:.4f}")
