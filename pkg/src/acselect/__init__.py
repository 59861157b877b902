"""Feature selection for binary classification data under k-anonymity by containment."""

from .adult import load_adult
from .dataset import (BinaryDataset, ContainmentSet, DataFormatError, FeatureSet, containment_set,
                      load, loads, dumps, project, write)
from .evaluation import EvalReport, auc, benchmark, cross_validate
from .miner import MaximalCollection, brute_force_maximal, frequent_itemsets, mine_maximal, support
from .privacy import (ACState, PrivacyAudit, ac_of_dataset, ac_of_entity, audit, incremental_ac_state,
                      per_entity_ac, satisfies_k_ac, satisfies_k_anonymity)
from .selectors import (SelectionResult, dp_release, select, select_cm_greedy, select_exponential_dp,
                        select_greedy_distcnt, select_greedy_hamdist, select_greedy_kanon,
                        select_laplace_dp, select_maximal)
from .utility import GroupPartition, cm_penalty, dist_cnt, entropy_score, ham_dist, marginal_gain

__version__ = "0.1.0"
