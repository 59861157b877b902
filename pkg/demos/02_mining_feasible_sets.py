# %% [markdown]
# # Mining the feasible region
#
# Every entity is treated as a transaction of its 1-features.  An itemset
# held by at least k entities keeps every entity that holds it k-anonymous
# by containment, and so does each of its subsets.  The maximal such
# itemsets summarize a (conservative) part of the feasible region.

# %%
import time

import numpy as np

from acselect import BinaryDataset, brute_force_maximal, mine_maximal, satisfies_k_ac, support
from acselect.miner import frequent_itemsets

data = BinaryDataset.from_matrix(
    [[1, 0, 1, 0, 1], [1, 0, 1, 0, 1], [1, 0, 0, 1, 1],
     [1, 0, 1, 0, 1], [1, 1, 1, 0, 1], [1, 1, 0, 1, 1]],
    [1, 0, 1, 1, 0, 0], ["x1", "x2", "x3", "x4", "x5"])

mined = mine_maximal(data, 2)
print(mined.to_lines(data))
print("itemsets below them:", len(mined.downset()))

# %% [markdown]
# The converse does not hold: a feature set can be feasible without any
# single entity holding all of it.

# %%
fs = data.features(["x3", "x4", "x5"])
print("support", support(data, fs), " 2-AC:", satisfies_k_ac(data, fs, 2))
print("frequent itemsets at support 2:", len(frequent_itemsets(data, 2)))

# %% [markdown]
# The depth-first miner against exhaustive enumeration on a larger random
# instance.

# %%
rng = np.random.default_rng(0)
m = rng.random((400, 18)) < 0.35
big = BinaryDataset.from_matrix(m, rng.random(400) < 0.5)
for k in (5, 20, 60):
    t = time.perf_counter()
    fast = mine_maximal(big, k)
    t_fast = time.perf_counter() - t
    t = time.perf_counter()
    slow = brute_force_maximal(big, k)
    t_slow = time.perf_counter() - t
    print(f"k={k:3d}  sets={len(fast):4d}  equal={fast.sets == slow.sets}  "
          f"dfs {t_fast:.3f}s  brute {t_slow:.3f}s")
