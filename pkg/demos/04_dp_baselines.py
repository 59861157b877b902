# %% [markdown]
# # Differentially private baselines
#
# Half of the budget picks N features (noisy top-N by HamDist, or N draws
# from the exponential mechanism), the other half publishes a noisy
# contingency table of the selected columns from which synthetic rows are
# generated.

# %%
import numpy as np

from acselect import BinaryDataset, select_exponential_dp, select_laplace_dp
from acselect.selectors import contingency_table, dp_select_and_release

data = BinaryDataset.from_matrix(
    [[1, 0, 1, 0, 1], [1, 0, 1, 0, 1], [1, 0, 0, 1, 1],
     [1, 0, 1, 0, 1], [1, 1, 1, 0, 1], [1, 1, 0, 1, 1]],
    [1, 0, 1, 1, 0, 0], ["x1", "x2", "x3", "x4", "x5"])

# %% [markdown]
# How often each feature is chosen first as the budget shrinks.

# %%
for eps in (1e6, 10.0, 1.0, 1e-3):
    counts = np.zeros(data.d, dtype=int)
    for seed in range(2000):
        counts[select_exponential_dp(data, eps, 1, seed=seed).features.members[0]] += 1
    print(f"eps={eps:g}: ", dict(zip(data.feature_names, counts.tolist())))

# %%
print("laplace, huge budget:", select_laplace_dp(data, 1e6, 2, seed=0).feature_names)

# %% [markdown]
# Release: with a very large budget the table is reproduced exactly; with a
# small one the synthetic data drift.

# %%
for eps in (1e6, 2.0):
    res, released = dp_select_and_release(data, "laplace-dp", eps, 2, seed=5)
    print(f"eps={eps:g} features={res.feature_names} rows={released.n}")
    print("  original:", contingency_table(data, res.features).tolist())
    print("  released:", contingency_table(released, None).tolist())
