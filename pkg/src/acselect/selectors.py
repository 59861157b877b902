"""Feature selection under an anonymity constraint, plus DP baselines.

AC-constrained selectors:

``maximal``         best of the ``r`` largest maximal feasible sets by HamDist
``greedy-hamdist``  scan features by per-feature HamDist, stop at the first
                    one that breaks the constraint
``greedy-distcnt``  repeatedly add the feature with the largest DistCnt gain
``cm-greedy``       same loop, minimizing the CM penalty

``kanon-hamdist`` / ``kanon-distcnt`` run the greedy loops with classical
k-anonymity in place of k-AC.  ``laplace-dp`` and ``exponential-dp`` select
features with the Laplace / exponential mechanism; :func:`dp_release`
publishes a noisy contingency table of the selected columns.

Ties are broken by ascending feature index everywhere; maximal candidates
are ordered by size (descending) then lexicographically.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .dataset import BinaryDataset, FeatureLike, FeatureSet, as_feature_set
from .miner import mine_maximal
from .privacy import ACState, ac_of_dataset, satisfies_k_ac, satisfies_k_anonymity
from .utility import (GroupPartition, dist_cnt, feature_contributions, ham_dist, pair_count,
                      utility_summary)

AC_METHODS = ("maximal", "greedy-hamdist", "greedy-distcnt", "cm-greedy")
KANON_METHODS = ("kanon-hamdist", "kanon-distcnt")
DP_METHODS = ("laplace-dp", "exponential-dp")
METHODS = AC_METHODS + KANON_METHODS + DP_METHODS

RELEASE_MAX_FEATURES = 20


def _fraction_json(v):
    if isinstance(v, Fraction):
        return {"num": v.numerator, "den": v.denominator, "value": float(v)}
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    return v


@dataclass
class SelectionResult:
    method: str
    param: float
    features: FeatureSet
    utility: dict
    achieved_ac: int
    constraint: str | None = None
    seed: int | None = None
    trace: list[tuple[int, object]] = field(default_factory=list)
    status: str = "ok"
    feature_names: list[str] = field(default_factory=list)

    @property
    def k(self):
        return self.param

    @property
    def sfc(self) -> int:
        return len(self.features)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "param": self.param,
            "constraint": self.constraint,
            "status": self.status,
            "seed": self.seed,
            "features": list(self.features.members),
            "feature_names": list(self.feature_names),
            "sfc": self.sfc,
            "achieved_ac": self.achieved_ac,
            "utility": {k: _fraction_json(v) for k, v in sorted(self.utility.items())},
            "trace": [{"feature": int(x), "gain": _fraction_json(g)} for x, g in self.trace],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def trace_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "feature", "name", "gain"])
        for step, (x, g) in enumerate(self.trace, start=1):
            name = self.feature_names[self.features.members.index(x)] if x in self.features else ""
            w.writerow([step, x, name, float(g)])
        return buf.getvalue()


def _result(data, method, param, features, trace, *, constraint=None, seed=None, status="ok"):
    fs = as_feature_set(features, data.d)
    return SelectionResult(
        method=method,
        param=param,
        features=fs,
        utility=utility_summary(data, fs),
        achieved_ac=ac_of_dataset(data, fs),
        constraint=constraint,
        seed=seed,
        trace=list(trace),
        status=status,
        feature_names=fs.names(data),
    )


def _check_k(data: BinaryDataset, k: int) -> None:
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")


def _constraint(kind: str, k: int) -> Callable[[ACState], bool]:
    if kind == "k-ac":
        return lambda state: state.dataset_ac >= k
    if kind == "k-anonymity":
        return lambda state: state.min_class_size >= k
    raise ValueError(f"unknown constraint {kind!r}")


def _infeasible(data, method, k, constraint):
    msg = f"{method}: k={k} exceeds n={data.n}; even the empty selection is infeasible"
    warnings.warn(msg, stacklevel=3)
    return _result(data, method, k, (), [], constraint=constraint, status="infeasible")


def select_maximal(data: BinaryDataset, k: int, r: int = 20, metric: str = "hamdist",
                   max_results: int | None = None) -> SelectionResult:
    """Score the ``r`` largest maximal feasible sets and keep the best."""
    _check_k(data, k)
    if r < 1:
        raise ValueError("r must be >= 1")
    if k > data.n:
        return _infeasible(data, "maximal", k, "k-ac")
    score = {"hamdist": ham_dist, "distcnt": dist_cnt}[metric]
    collection = mine_maximal(data, k, max_results=max_results)
    if not collection.sets:
        warnings.warn(f"maximal: no feasible feature set for k={k} (n={data.n})", stacklevel=2)
        return _result(data, "maximal", k, (), [], constraint="k-ac", status="empty")
    best, best_score = None, None
    for fs, _ in collection.sets[:r]:
        s = score(data, fs)
        if best_score is None or s > best_score:
            best, best_score = fs, s
    status = "truncated" if collection.truncated else "ok"
    contrib = feature_contributions(data)
    pairs = pair_count(data)
    trace = [(x, Fraction(int(contrib[x]), pairs)) for x in best]
    return _result(data, "maximal", k, best, trace, constraint="k-ac", status=status)


def _greedy_hamdist(data, k, method, constraint, greedy_continue):
    _check_k(data, k)
    if k > data.n:
        return _infeasible(data, method, k, constraint)
    contrib = feature_contributions(data)
    pairs = pair_count(data)
    order = sorted(range(data.d), key=lambda x: (-int(contrib[x]), x))
    feasible = _constraint(constraint, k)
    state = ACState(data)
    trace = []
    for x in order:
        nxt = state.extend(x)
        if feasible(nxt):
            state = nxt
            trace.append((x, Fraction(int(contrib[x]), pairs)))
        elif not greedy_continue:
            break
    return _result(data, method, k, state.members, trace, constraint=constraint)


def _greedy_gain(data, k, method, constraint, metric):
    _check_k(data, k)
    if k > data.n:
        return _infeasible(data, method, k, constraint)
    pairs = pair_count(data) if metric == "distcnt" else None
    feasible = _constraint(constraint, k)
    state = ACState(data)
    part = GroupPartition(data)
    trace = []
    while True:
        cand, gains = part.gains(metric)
        if len(cand) == 0:
            break
        i = int(np.argmax(gains))
        if gains[i] <= 0:
            break
        x = int(cand[i])
        nxt = state.extend(x)
        if not feasible(nxt):
            break
        state = nxt
        part.add(x)
        trace.append((x, Fraction(int(gains[i]), pairs) if pairs else int(gains[i])))
    return _result(data, method, k, state.members, trace, constraint=constraint)


def select_greedy_hamdist(data: BinaryDataset, k: int, greedy_continue: bool = False) -> SelectionResult:
    """HamDist greedy under k-AC.

    With ``greedy_continue`` a violating feature is skipped instead of
    ending the scan.
    """
    return _greedy_hamdist(data, k, "greedy-hamdist", "k-ac", greedy_continue)


def select_greedy_distcnt(data: BinaryDataset, k: int) -> SelectionResult:
    """DistCnt greedy under k-AC; stops when the best candidate is infeasible or gains nothing."""
    return _greedy_gain(data, k, "greedy-distcnt", "k-ac", "distcnt")


def select_greedy_kanon(data: BinaryDataset, k: int, metric: str = "hamdist",
                        greedy_continue: bool = False) -> SelectionResult:
    if metric == "hamdist":
        return _greedy_hamdist(data, k, "kanon-hamdist", "k-anonymity", greedy_continue)
    if metric == "distcnt":
        return _greedy_gain(data, k, "kanon-distcnt", "k-anonymity", "distcnt")
    raise ValueError(f"unknown metric {metric!r}")


def select_cm_greedy(data: BinaryDataset, k: int) -> SelectionResult:
    return _greedy_gain(data, k, "cm-greedy", "k-ac", "cm")


# -- differential privacy baselines -------------------------------------------------

def split_budget(epsilon: float) -> tuple[float, float]:
    """Half of the budget for selection, half for the release."""
    return epsilon / 2, epsilon / 2


def hamdist_sensitivity(data: BinaryDataset) -> Fraction:
    """Sensitivity of a single-feature HamDist score.

    Changing one POS entity's bit changes at most ``|NEG|`` of the
    ``|POS|*|NEG|`` pair indicators, i.e. ``1/|POS|``; symmetrically for NEG.
    """
    pair_count(data)
    return Fraction(1, min(data.n_pos, data.n_neg))


def _check_dp(data, epsilon, num_features):
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    if int(num_features) != num_features or not 1 <= num_features <= data.d:
        raise ValueError(f"num_features must be in [1, {data.d}], got {num_features!r}")


def select_laplace_dp(data: BinaryDataset, epsilon: float, num_features: int,
                      seed: int | None = 0, rng: np.random.Generator | None = None) -> SelectionResult:
    """Top-N features by Laplace-noised per-feature HamDist.

    ``epsilon`` is the total budget; the selection step spends half of it.
    """
    _check_dp(data, epsilon, num_features)
    rng = rng if rng is not None else np.random.default_rng(seed)
    eps_sel, _ = split_budget(epsilon)
    scores = feature_contributions(data) / pair_count(data)
    scale = float(hamdist_sensitivity(data)) / eps_sel
    noisy = scores + rng.laplace(0.0, scale, size=data.d)
    order = np.lexsort((np.arange(data.d), -noisy))[:num_features]
    trace = [(int(x), float(noisy[x])) for x in order]
    return _result(data, "laplace-dp", epsilon, sorted(int(x) for x in order), trace, seed=seed)


def select_exponential_dp(data: BinaryDataset, epsilon: float, num_features: int,
                          seed: int | None = 0, rng: np.random.Generator | None = None) -> SelectionResult:
    """Draw N distinct features, each with probability proportional to
    ``exp(eps_i * H(x) / (2 * sensitivity))`` where ``eps_i`` is the selection
    half of the budget split evenly over the draws."""
    _check_dp(data, epsilon, num_features)
    rng = rng if rng is not None else np.random.default_rng(seed)
    eps_sel, _ = split_budget(epsilon)
    eps_draw = eps_sel / num_features
    scores = feature_contributions(data) / pair_count(data)
    logits = eps_draw / (2 * float(hamdist_sensitivity(data))) * scores
    remaining = list(range(data.d))
    trace = []
    for _ in range(num_features):
        z = logits[remaining]
        p = np.exp(z - z.max())
        p /= p.sum()
        pick = remaining.pop(int(rng.choice(len(z), p=p)))
        trace.append((pick, float(scores[pick])))
    return _result(data, "exponential-dp", epsilon, sorted(x for x, _ in trace), trace, seed=seed)


def contingency_table(data: BinaryDataset, features: FeatureLike) -> np.ndarray:
    """Counts indexed by ``[signature, label]`` with label column 0 = POS, 1 = NEG.

    The signature of a row sets bit ``j`` when it has the ``j``-th selected feature.
    """
    fs = as_feature_set(features, data.d)
    s = len(fs)
    if s > RELEASE_MAX_FEATURES:
        raise ValueError(f"cannot materialize 2**{s} marginals; at most {RELEASE_MAX_FEATURES} features")
    sig = data.matrix[:, list(fs.members)].astype(np.int64) @ (1 << np.arange(s, dtype=np.int64))
    key = sig * 2 + (~data.labels).astype(np.int64)
    return np.bincount(key, minlength=2 << s).reshape(1 << s, 2)


def dp_release(data: BinaryDataset, features: FeatureLike, epsilon: float,
               seed: int | None = 0, rng: np.random.Generator | None = None,
               max_rows: int | None = None) -> BinaryDataset:
    """Synthetic projection of ``data`` from a Laplace-noised contingency table.

    ``epsilon`` is the budget spent here (use :func:`split_budget` for the
    end-to-end pipelines).  Noisy counts are rounded and clamped at zero.
    Very small budgets produce enormous noisy counts; materializing more than
    ``max_rows`` rows (default ``max(10 n, 10000)``) raises ``ValueError``.
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    fs = as_feature_set(features, data.d)
    table = contingency_table(data, fs)
    rng = rng if rng is not None else np.random.default_rng(seed)
    noisy = table + rng.laplace(0.0, 1.0 / epsilon, size=table.shape)
    counts = np.maximum(np.rint(noisy), 0).astype(np.int64)
    names = fs.names(data)
    limit = max(10 * data.n, 10_000) if max_rows is None else max_rows
    if counts.sum() > limit:
        raise ValueError(f"noisy table holds {int(counts.sum())} rows (limit {limit}); "
                         f"epsilon={epsilon!r} is too small to materialize a release")
    if counts.sum() == 0:
        warnings.warn("dp_release: all noisy counts are zero; released dataset is empty", stacklevel=2)
        return BinaryDataset((), np.zeros(0, dtype=bool), len(fs), names)
    sigs = np.repeat(np.arange(counts.shape[0]), counts.sum(axis=1))
    labels = np.concatenate([np.repeat([True, False], c) for c in counts])
    return BinaryDataset(tuple(int(s) for s in sigs), labels, len(fs), names)


def dp_select_and_release(data: BinaryDataset, method: str, epsilon: float, num_features: int,
                          seed: int | None = 0) -> tuple[SelectionResult, BinaryDataset]:
    """Select with a DP mechanism and release the projection, one RNG stream, total budget ``epsilon``."""
    rng = np.random.default_rng(seed)
    select = {"laplace-dp": select_laplace_dp, "exponential-dp": select_exponential_dp}[method]
    result = select(data, epsilon, num_features, seed=seed, rng=rng)
    _, eps_rel = split_budget(epsilon)
    return result, dp_release(data, result.features, eps_rel, rng=rng)


def select(data: BinaryDataset, method: str, *, k: int | None = None, epsilon: float | None = None,
           num_features: int | None = None, r: int = 20, seed: int | None = 0,
           greedy_continue: bool = False, max_results: int | None = None) -> SelectionResult:
    """Dispatch on a method identifier (see ``METHODS``)."""
    if method in AC_METHODS or method in KANON_METHODS:
        if k is None:
            raise ValueError(f"method {method!r} requires k")
    if method == "maximal":
        return select_maximal(data, k, r=r, max_results=max_results)
    if method == "greedy-hamdist":
        return select_greedy_hamdist(data, k, greedy_continue=greedy_continue)
    if method == "greedy-distcnt":
        return select_greedy_distcnt(data, k)
    if method == "cm-greedy":
        return select_cm_greedy(data, k)
    if method == "kanon-hamdist":
        return select_greedy_kanon(data, k, "hamdist", greedy_continue=greedy_continue)
    if method == "kanon-distcnt":
        return select_greedy_kanon(data, k, "distcnt")
    if method in DP_METHODS:
        if epsilon is None or num_features is None:
            raise ValueError(f"method {method!r} requires epsilon and num_features")
        fn = select_laplace_dp if method == "laplace-dp" else select_exponential_dp
        return fn(data, epsilon, num_features, seed=seed)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def verify_constraint(data: BinaryDataset, result: SelectionResult) -> bool:
    """Re-audit a selection against the constraint it claims."""
    if result.status == "infeasible":
        return True
    if result.constraint == "k-ac":
        return satisfies_k_ac(data, result.features, int(result.param))
    if result.constraint == "k-anonymity":
        return satisfies_k_anonymity(data, result.features, int(result.param))
    return True
