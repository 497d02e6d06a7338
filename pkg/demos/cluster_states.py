# %% [markdown]
# Continuous-variable graph states from collective squeezing.

# %%
import numpy as np

from cavspin.cv_gaussian import (
    entanglement_entropy,
    epr_criterion,
    local_ops,
    nullifier_variances,
    prepare_graph_state,
    prescription_from_adjacency,
)

# %% [markdown]
# Two nodes and one edge. The adjacency eigenmodes fix the squeezing angles.

# %%
A = np.array([[0.0, 1.0], [1.0, 0.0]])
p = prescription_from_adjacency(A)
print("eigenvalues", p.eigenvalues, "angles", np.round(p.angles, 4))

for r in (0.5, 1.0, 1.5):
    s = local_ops(prepare_graph_state(A, r), [0], "rotate", np.pi / 2)
    e = epr_criterion(s, 0, 1)
    print(f"r = {r}  V_sum = {e.V_sum:.4f}  (2 e^-2r = {2 * np.exp(-2 * r):.4f})  S_A = {entanglement_entropy(s, [0]):.3f}")

# %% [markdown]
# A square: nullifier noise drops with squeezing.

# %%
C4 = np.array([[0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0]], dtype=float)
for r in (0.0, 0.5, 1.0, 2.0):
    print(r, np.round(nullifier_variances(prepare_graph_state(C4, r), C4), 5))
