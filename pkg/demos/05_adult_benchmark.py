# %% [markdown]
# # Privacy versus utility on Adult
#
# Needs the UCI Adult training file at ``data/adult.data`` (the path can be
# given as the first argument).  Attributes are binarized into 19 features;
# the label is income above 50K.  The same sweep is available on the command
# line via ``acselect benchmark --format adult``.

# %%
import sys
from pathlib import Path

from acselect import benchmark, load_adult, select
from acselect.evaluation import benchmark_csv

path = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "data" / "adult.data")
if not path.exists():
    sys.exit(f"{path} not found")
data = load_adult(path)
print(data, data.feature_names)

# %% [markdown]
# Selected feature counts as k grows.

# %%
for method in ("maximal", "greedy-hamdist", "greedy-distcnt", "kanon-hamdist"):
    row = [select(data, method, k=k) for k in (5, 8, 11)]
    print(f"{method:15s}", [(r.sfc, r.achieved_ac) for r in row])

# %% [markdown]
# Five-fold AUC of the internal logistic model for each cell.

# %%
reports = benchmark(data, ["greedy-hamdist", "greedy-distcnt", "kanon-hamdist", "laplace-dp", "exponential-dp"],
                    k_list=(5, 8, 11), epsilon_list=(0.5, 2.0), seed=0, include_full=True, workers=4)
print(benchmark_csv(reports))
