# %% [markdown]
# # Bounds on special channels
#
# For the depolarizing channel and its two generalizations both bounds meet
# and equal a closed form. We check that over a parameter grid, then look at
# a channel where the sorted d-set is not achievable.

# %%
import math

import numpy as np

from weylcap.bounds import coincidence_test, depolarizing_capacity, dset_from_sorted
from weylcap.channel import ChannelDistribution, depolarizing_channel, depolarizing_like_two
from weylcap.experiments import special_report
from weylcap.oracle import OptimizerConfig, min_output_entropy

# %% [markdown]
# ## Depolarizing channel

# %%
mus = np.linspace(0, 1, 11)
for d in (2, 3, 5, 7):
    gaps = []
    for mu in mus:
        rep = coincidence_test(depolarizing_channel(d, mu))
        gaps.append(max(abs(rep.chi_lb - depolarizing_capacity(d, mu)), abs(rep.chi_ub - rep.chi_lb)))
    print(f"d={d}: capacities", np.round([depolarizing_capacity(d, mu) for mu in mus], 4), f"max gap {max(gaps):.1e}")

# %% [markdown]
# ## Two-operator generalization

# %%
p = depolarizing_like_two(2, 0.8, 0.9, (0, 1), (1, 0))
print("weights", p.probs)
print(special_report("depol-like-2", 2, eta=0.8, kappa=0.9, idx_a=(0, 1), idx_b=(1, 0)))
print(special_report("depol-like-2", 5, eta=0.6, kappa=0.7, idx_a=(1, 1), idx_b=(2, 3)))

# %% [markdown]
# ## When the sorted d-set is not achievable
# Put the largest weights on a partition of the qutrit indices that is not a
# residue partition. The bounds separate; the optimizer shows where the true
# value lies.

# %%
groups = [[(0, 0), (0, 1), (1, 2)], [(2, 0), (1, 1), (2, 2)], [(1, 0), (2, 1), (0, 2)]]
w = np.zeros(9)
for g, level in zip(groups, [0.2, 0.11, 0.02]):
    for k, (n, m) in enumerate(g):
        w[3 * n + m] = level + 0.005 * (1 - k)
w += (1 - w.sum()) / 9
p = ChannelDistribution(3, w)
rep = coincidence_test(p)
opt = min_output_entropy(p, OptimizerConfig(restarts=8)).chi_opt
print("sorted groups:", dset_from_sorted(p).groups)
print(f"chi_lb={rep.chi_lb:.6f}  chi_opt={opt:.6f}  chi_ub={rep.chi_ub:.6f}  log2 d={math.log2(3):.6f}")
print("coincide:", rep.coincide)
