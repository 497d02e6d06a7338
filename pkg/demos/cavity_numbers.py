# %% [markdown]
# Back-of-envelope cavity numbers: cooperativity, the Ising budget, and the
# measurement-squeezing limits as the collective cooperativity grows.

# %%
import numpy as np

from cavspin.cavity_budget import CavityGeometry, cooperativity_geometric, ising_budget, squeezing_exponent
from cavspin.qnd import herald_w_faraday, vacuum_rabi_spectrum

# %%
geom = CavityGeometry(1e4, 15e-6, 780e-9)
print(f"single-atom cooperativity eta = {cooperativity_geometric(geom):.4f}")

for eta in (1.0, 10.0, 100.0):
    b = ising_budget(1.0, 1.0, 1.0, 1.0, eta)
    print(f"eta = {eta:6.1f}  optimal detuning {b.delta_opt:.3f}  interaction/decay {b.ratio_opt:.3f}")

# %%
X = np.geomspace(1e2, 1e6, 9)
print("cycling exponent", round(squeezing_exponent(X, r=0.0)[0], 3))
print("Raman exponent  ", round(squeezing_exponent(X, r=1.0)[0], 3))

# %% [markdown]
# Vacuum Rabi splitting grows like sqrt(N); a weak Faraday herald picks out a W state.

# %%
for N in (1, 4, 16):
    print(N, round(vacuum_rabi_spectrum(1.0, N, 0.1, 0.1).splitting, 4))
print("W-state fidelity", herald_w_faraday(4, 0.01).fidelity)
