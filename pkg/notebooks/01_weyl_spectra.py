# %% [markdown]
# # Weyl operators and their spectra
#
# The clock-and-shift operators `W_nm` act as `|k> -> w^(kn) |k - m>`.
# Their eigenvalues follow from `n`, `m` and `d` alone, so no numerical
# diagonalization is needed. This script compares the closed form against
# `numpy.linalg.eigvals` and shows what happens when `d` is composite.

# %%
import numpy as np

from weylcap.weyl import all_indices, weyl_eigenbasis, weyl_eigenvalues, weyl_operator, weyl_order

np.set_printoptions(precision=4, suppress=True)

# %% [markdown]
# ## A prime dimension
# For `d = 5` every non-identity operator has order 5 and five distinct
# eigenvalues, the fifth roots of unity up to a common phase.

# %%
d = 5
W = weyl_operator((2, 3), d)
print("order, phase:", weyl_order((2, 3), d))
print("closed form :", np.sort_complex(weyl_eigenvalues((2, 3), d)))
print("numerical   :", np.sort_complex(np.linalg.eigvals(W)))

# %% [markdown]
# ## A composite dimension
# For `d = 4`, `W_20` has order 2: its eigenvalues `+1, -1` repeat twice and
# the eigenbasis is no longer unique. The canonical basis picks vectors
# supported on the cycles of the shift.

# %%
d = 4
spec = weyl_eigenbasis((2, 0), d)
print("order", spec.order, "degenerate", spec.degenerate)
print(spec.eigenvalues)
print(spec.eigenvectors)

spec = weyl_eigenbasis((1, 2), d)
print("W_12: order", spec.order, "eigenvalues", spec.eigenvalues)
print("residual", np.abs(weyl_operator((1, 2), d) @ spec.eigenvectors - spec.eigenvectors * spec.eigenvalues).max())

# %% [markdown]
# ## Worst closed-form error up to d = 12

# %%
worst = {}
for d in range(2, 13):
    err = 0.0
    for idx in all_indices(d):
        spec = weyl_eigenbasis(idx, d)
        V = spec.eigenvectors
        err = max(err, np.abs(weyl_operator(idx, d) @ V - V * spec.eigenvalues).max())
    worst[d] = err
for d, err in worst.items():
    print(f"d={d:2d}  max |W v - lambda v| = {err:.2e}")
