# %% [markdown]
# # Random channels
#
# Channels are drawn uniformly from the probability simplex. For each one we
# compute both bounds and a direct numerical optimum, sorted by decreasing
# upper bound. The coincidence rate drops quickly with the dimension.

# %%
import numpy as np

from weylcap.experiments import run_sweep, sweep_csv_text

COUNT = 60

# %%
rows = run_sweep(3, COUNT, seed=0, oracle=True, restarts=4)
lb = np.array([r.chi_lb for r in rows])
ub = np.array([r.chi_ub for r in rows])
opt = np.array([r.chi_opt for r in rows])
print("gap ub - lb   : mean %.4f  max %.4f" % ((ub - lb).mean(), (ub - lb).max()))
print("opt - lb      : max %.2e" % (opt - lb).max())
print("coincidences  :", sum(r.coincide for r in rows), "of", COUNT)
print("saturated lb without coincidence:", sum((not r.coincide) and abs(r.chi_opt - r.chi_lb) < 1e-4 for r in rows))

# %% [markdown]
# The first lines of the CSV the `sweep` subcommand would write:

# %%
print("".join(sweep_csv_text(rows[:5]).splitlines(keepends=True)))

# %% [markdown]
# ## Coincidence rate against dimension (bounds only)

# %%
for d in (2, 3, 4, 5):
    sweep = run_sweep(d, 400, seed=0, oracle=False)
    print(f"d={d}: {np.mean([r.coincide for r in sweep]):.3f}")
