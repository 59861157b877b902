"""Utility evaluation: linear classifier, stratified cross-validation, AUC,
and the privacy/utility benchmark sweep."""

from __future__ import annotations

import csv
import io
import json
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import rankdata

from .dataset import BinaryDataset, FeatureLike, as_feature_set, project
from .selectors import (AC_METHODS, DP_METHODS, KANON_METHODS, METHODS, dp_select_and_release, select,
                        verify_constraint)

L2_STRENGTH = 1.0
MAX_ITER = 500


class EvaluationError(ValueError):
    pass


def auc(scores, labels) -> float:
    """Mann-Whitney AUC: share of (POS, NEG) pairs ranked correctly, ties count 1/2."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels, dtype=bool)
    n_pos = int(labels.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise EvaluationError("AUC needs both classes")
    ranks = rankdata(scores)
    u = ranks[labels].sum() - n_pos * (n_pos + 1) / 2
    return float(u / (n_pos * n_neg))


def logistic_objective(w: np.ndarray, X: np.ndarray, y: np.ndarray, l2: float = L2_STRENGTH):
    """Mean logistic loss plus ``l2 / (2n) * ||w||^2`` (bias, the last weight, unpenalized).

    ``X`` must already carry the trailing column of ones; ``y`` is in {0, 1}.
    Returns ``(value, gradient)``.
    """
    n = len(y)
    z = X @ w
    loss = np.logaddexp(0.0, z) - y * z
    reg = w.copy()
    reg[-1] = 0.0
    value = loss.mean() + l2 / (2 * n) * reg @ reg
    p = 0.5 * (1.0 + np.tanh(0.5 * z))
    grad = X.T @ (p - y) / n + l2 / n * reg
    return float(value), grad


def _design(matrix: np.ndarray) -> np.ndarray:
    X = np.asarray(matrix, dtype=float)
    return np.hstack([X, np.ones((X.shape[0], 1))])


def train_linear(matrix, labels, l2: float = L2_STRENGTH, max_iter: int = MAX_ITER) -> np.ndarray:
    """L2-regularized logistic regression by full-batch gradient descent.

    Starts from zero with the fixed step ``1/L`` (``L`` the smoothness bound of
    the objective) and runs exactly ``max_iter`` steps, so results are
    deterministic.  The returned vector ends with the bias.
    """
    y = np.asarray(labels, dtype=float)
    if y.min(initial=1.0) == y.max(initial=0.0):
        raise EvaluationError("training data contains a single class")
    X = _design(matrix)
    n = len(y)
    lipschitz = 0.25 * np.linalg.norm(X, 2) ** 2 / n + l2 / n
    step = 1.0 / lipschitz
    w = np.zeros(X.shape[1])
    for _ in range(max_iter):
        _, g = logistic_objective(w, X, y, l2)
        w -= step * g
    return w


def decision_scores(w: np.ndarray, matrix) -> np.ndarray:
    return _design(matrix) @ w


def stratified_folds(labels, folds: int, rng: np.random.Generator) -> np.ndarray:
    """Fold id per entity: each class is shuffled and dealt round-robin."""
    labels = np.asarray(labels, dtype=bool)
    fold = np.empty(len(labels), dtype=np.int64)
    for cls in (True, False):
        idx = np.flatnonzero(labels == cls)
        if len(idx) < folds:
            raise EvaluationError(f"class with {len(idx)} entities cannot be split into {folds} folds")
        idx = rng.permutation(idx)
        fold[idx] = np.arange(len(idx)) % folds
    return fold


@dataclass
class EvalReport:
    method: str
    param: float | None
    feature_count: int
    auc_mean: float
    auc_std: float
    fold_aucs: list[float]
    seed: int | None
    wall_time: float = 0.0
    status: str = "ok"
    message: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def cross_validate(data: BinaryDataset, features: FeatureLike | None = None, folds: int = 5,
                   seed: int | None = 0, rng: np.random.Generator | None = None,
                   method: str = "evaluate", param=None) -> EvalReport:
    """Stratified k-fold AUC of the linear classifier on ``project(data, features)``."""
    start = time.perf_counter()
    fs = as_feature_set(features, data.d)
    if folds < 2:
        raise EvaluationError("need at least 2 folds")
    if data.n < folds:
        raise EvaluationError(f"n={data.n} is smaller than folds={folds}")
    rng = rng if rng is not None else np.random.default_rng(seed)
    fold = stratified_folds(data.labels, folds, rng)
    X = data.matrix[:, list(fs.members)]
    y = data.labels
    aucs = []
    for f in range(folds):
        test = fold == f
        w = train_linear(X[~test], y[~test])
        aucs.append(auc(decision_scores(w, X[test]), y[test]))
    return EvalReport(method=method, param=param, feature_count=len(fs),
                      auc_mean=float(np.mean(aucs)), auc_std=float(np.std(aucs)),
                      fold_aucs=aucs, seed=seed, wall_time=time.perf_counter() - start)


# -- benchmark ------------------------------------------------------------------------

FULL = "full"
BENCHMARK_COLUMNS = ("method", "param", "sfc", "auc_mean", "auc_std", "time")


def cell_rng(seed: int, method: str, param) -> np.random.Generator:
    """Independent stream per (seed, method, param); stable across runs and worker counts."""
    return np.random.default_rng(np.random.SeedSequence(
        [seed, zlib.crc32(method.encode()), zlib.crc32(repr(param).encode())]))


def run_cell(data: BinaryDataset, method: str, param, *, seed: int = 0, folds: int = 5,
             num_features: int | None = None, r: int = 20,
             greedy_continue: bool = False) -> EvalReport:
    """select -> re-audit -> project (or DP release) -> cross-validate."""
    start = time.perf_counter()
    rng = cell_rng(seed, method, param)
    cv_seed = int(rng.integers(2**31))
    try:
        if method == FULL:
            evaluated, n_feat = data, data.d
        elif method in DP_METHODS:
            sel, evaluated = dp_select_and_release(data, method, float(param), num_features,
                                                   seed=int(rng.integers(2**31)))
            n_feat = sel.sfc
        else:
            sel = select(data, method, k=int(param), r=r, greedy_continue=greedy_continue)
            if not verify_constraint(data, sel):
                raise EvaluationError(f"{method} output violates its {sel.constraint} constraint")
            evaluated, n_feat = project(data, sel.features), sel.sfc
        report = cross_validate(evaluated, None, folds=folds, seed=cv_seed, method=method, param=param)
        report.feature_count = n_feat
        report.seed = seed
    except Exception as exc:  # a failed cell must not stop the sweep
        report = EvalReport(method=method, param=param, feature_count=0, auc_mean=float("nan"),
                            auc_std=float("nan"), fold_aucs=[], seed=seed, status="FAILED",
                            message=f"{type(exc).__name__}: {exc}")
    report.wall_time = time.perf_counter() - start
    return report


def benchmark(data: BinaryDataset, methods, k_list=(5, 8, 11), epsilon_list=(0.5, 1.0, 1.5, 2.0), *,
              seed: int = 0, folds: int = 5, num_features: int | None = None, r: int = 20,
              include_full: bool = False, greedy_continue: bool = False,
              workers: int = 1) -> list[EvalReport]:
    """Evaluate every (method, parameter) cell.

    AC and k-anonymity methods sweep ``k_list``; DP methods sweep
    ``epsilon_list`` with ``num_features`` features (default: the count chosen
    by greedy-hamdist at the smallest k).
    """
    methods = list(methods)
    unknown = [m for m in methods if m not in METHODS and m != FULL]
    if unknown:
        raise ValueError(f"unknown method(s) {unknown}; expected some of {METHODS + (FULL,)}")
    if any(m in DP_METHODS for m in methods) and num_features is None:
        ref = select(data, "greedy-hamdist", k=min(k_list))
        num_features = max(ref.sfc, 1)
    cells = []
    for m in methods:
        if m in AC_METHODS or m in KANON_METHODS:
            cells += [(m, k) for k in k_list]
        elif m in DP_METHODS:
            cells += [(m, e) for e in epsilon_list]
    if include_full or FULL in methods:
        cells.append((FULL, None))

    def job(cell):
        m, p = cell
        return run_cell(data, m, p, seed=seed, folds=folds, num_features=num_features, r=r,
                        greedy_continue=greedy_continue)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(job, cells))
    return [job(c) for c in cells]


def benchmark_csv(reports, include_time: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCHMARK_COLUMNS)
    for rep in reports:
        if rep.status == "FAILED":
            w.writerow([rep.method, _fmt(rep.param), "FAILED", "", "", ""])
            continue
        w.writerow([rep.method, _fmt(rep.param), rep.feature_count, f"{rep.auc_mean:.6f}",
                    f"{rep.auc_std:.6f}", f"{rep.wall_time:.3f}" if include_time else ""])
    return buf.getvalue()


def benchmark_json(reports, include_time: bool = True) -> str:
    rows = []
    for rep in reports:
        row = {"method": rep.method, "param": rep.param, "sfc": rep.feature_count,
               "auc_mean": rep.auc_mean, "auc_std": rep.auc_std, "status": rep.status,
               "fold_aucs": rep.fold_aucs}
        if include_time:
            row["time"] = rep.wall_time
        if rep.message:
            row["message"] = rep.message
        rows.append(row)
    return json.dumps(rows, indent=2, allow_nan=True) + "\n"


def _fmt(param) -> str:
    return "" if param is None else f"{param:g}"
