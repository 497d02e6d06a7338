# %% [markdown]
# Programming coupling graphs with a modulation spectrum, and reading geometry
# back out of correlations after a Gaussian quench.

# %%
import numpy as np

from cavspin.floquet_graphs import (
    builder_mobius,
    builder_tree,
    coarse_grain_tree,
    corr_to_geometry,
    coupling_table,
    couplings_to_spectrum,
    gaussian_quench,
    spectrum_to_couplings,
)

# %% [markdown]
# A distance table becomes a set of tones, and the tones rebuild the same table.

# %%
table = {1: 1.0, 3: -0.5, 6: 0.25}
spec = couplings_to_spectrum(table, 10.0)
for tone in spec.tones:
    print(f"r = {tone.r}  amp = {tone.amp}  phase = {tone.phase:.3f}")
print("recovered", coupling_table(spectrum_to_couplings(spec, 12)))

# %% [markdown]
# The Mobius ladder on 18 sites: ferromagnetic rails and antiferromagnetic rungs.

# %%
J = builder_mobius(18, 1.0, -1.0).J
iu = np.triu_indices(18, 1)
print("rails", int((J[iu] > 0).sum()), "rungs", int((J[iu] < 0).sum()), "degree", set((J != 0).sum(1)))

# %% [markdown]
# A 2-adic tree coupling, quenched briefly, clusters sites by their distance in
# the tree rather than along the chain.

# %%
tr = gaussian_quench(builder_tree(0.5, 16), 1.0, [0.2])
tree = coarse_grain_tree(tr.C_xx[-1])
print("leaf order", tree.leaf_order())
g = corr_to_geometry(tr.C_xx[-1])
print("leading MDS eigenvalues", np.round(g.eigenvalues[:4], 4))
