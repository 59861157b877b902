# %% [markdown]
# # Anonymity by containment
#
# A binary dataset only discloses something about an entity through its
# 1-cells.  An entity is hidden among every entity whose set of 1-features
# contains its own, so the anonymity count of an entity is the number of
# such supersets (itself included).  The dataset-level value is the minimum.

# %%
import numpy as np

from acselect import BinaryDataset, ac_of_dataset, audit, per_entity_ac, satisfies_k_anonymity

matrix = np.array([[1, 0, 1, 0, 1],
                   [1, 0, 1, 0, 1],
                   [1, 0, 0, 1, 1],
                   [1, 0, 1, 0, 1],
                   [1, 1, 1, 0, 1],
                   [1, 1, 0, 1, 1]])
labels = [1, 0, 1, 1, 0, 0]
data = BinaryDataset.from_matrix(matrix, labels, ["x1", "x2", "x3", "x4", "x5"])
print(data)

# %% [markdown]
# Per-entity counts on all five features.  The last two entities are unique.

# %%
print(per_entity_ac(data))
print("dataset:", ac_of_dataset(data))

# %% [markdown]
# Dropping columns can only enlarge the sets of dominating entities.  Two
# three-feature projections are compared with classical k-anonymity, which
# needs identical rows and is therefore the stricter notion.

# %%
for cols in (["x1", "x2", "x5"], ["x3", "x4", "x5"], ["x2", "x3", "x4"]):
    fs = data.features(cols)
    rep = audit(data, fs, k=2)
    print(cols, "AC =", rep.dataset_ac, " 2-anonymous:", satisfies_k_anonymity(data, fs, 2),
          " class sizes:", rep.kanon_class_sizes)
