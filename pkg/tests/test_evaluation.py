import csv
import io
import json

import numpy as np
import pytest

from acselect import BinaryDataset, auc, benchmark, cross_validate, select
from acselect.evaluation import (EvaluationError, _design, benchmark_csv, benchmark_json, decision_scores,
                                 logistic_objective, stratified_folds, train_linear)
from generators import random_dataset


def pair_auc(scores, labels):
    """Direct pair-counting AUC."""
    pos = [s for s, y in zip(scores, labels) if y]
    neg = [s for s, y in zip(scores, labels) if not y]
    won = sum(1.0 if a > b else 0.5 if a == b else 0.0 for a in pos for b in neg)
    return won / (len(pos) * len(neg))


def test_auc_conventions():
    y = [1, 1, 0, 0]
    assert auc([4, 3, 2, 1], y) == 1.0
    assert auc([1, 2, 3, 4], y) == 0.0
    assert auc([7, 7, 7, 7], y) == 0.5
    with pytest.raises(EvaluationError):
        auc([1, 2], [1, 1])


def test_auc_against_pair_count_and_monotone_invariance(rng):
    for _ in range(100):
        n = int(rng.integers(2, 40))
        y = rng.random(n) < 0.5
        if y.all() or not y.any():
            continue
        s = rng.integers(0, 5, size=n).astype(float)
        assert auc(s, y) == pytest.approx(pair_auc(s, y), abs=1e-12)
        assert auc(np.exp(s) * 3 - 1, y) == pytest.approx(auc(s, y), abs=1e-12)


def test_gradient_matches_finite_differences(rng):
    X = _design(rng.integers(0, 2, size=(30, 4)))
    y = (rng.random(30) < 0.4).astype(float)
    for w in (np.zeros(5), rng.normal(size=5)):
        _, g = logistic_objective(w, X, y)
        h = 1e-6
        num = np.array([(logistic_objective(w + h * e, X, y)[0] - logistic_objective(w - h * e, X, y)[0]) / (2 * h)
                        for e in np.eye(5)])
        assert np.allclose(g, num, atol=1e-6)


def test_separable_pair_and_zero_features():
    w = train_linear(np.array([[1.0], [0.0]]), np.array([True, False]))
    assert auc(decision_scores(w, np.array([[1.0], [0.0]])), [1, 0]) == 1.0
    w0 = train_linear(np.zeros((4, 0)), np.array([True, False, True, False]))
    scores = decision_scores(w0, np.zeros((4, 0)))
    assert np.ptp(scores) == 0
    assert auc(scores, [1, 0, 1, 0]) == 0.5
    with pytest.raises(EvaluationError):
        train_linear(np.ones((3, 1)), np.array([True, True, True]))


def test_stratified_folds_are_balanced(rng):
    labels = np.array([True] * 13 + [False] * 22)
    fold = stratified_folds(labels, 5, rng)
    for f in range(5):
        assert abs(labels[fold == f].sum() - 13 / 5) < 1
        assert abs((~labels[fold == f]).sum() - 22 / 5) < 1
    with pytest.raises(EvaluationError):
        stratified_folds(np.array([True, False, False]), 2, rng)


def test_duplicated_rows_give_zero_std():
    data = BinaryDataset.from_matrix([[1, 0, 1]] * 10 + [[0, 1, 1]] * 10, [1] * 10 + [0] * 10)
    rep = cross_validate(data, folds=5, seed=3)
    assert rep.fold_aucs == [1.0] * 5 and rep.auc_std == 0.0


def test_toy_cv_matches_manual_holdout(toy):
    rep = cross_validate(toy, folds=3, seed=9)
    fold = stratified_folds(toy.labels, 3, np.random.default_rng(9))
    X, y = toy.matrix, toy.labels
    manual = []
    for f in range(3):
        test = fold == f
        w = train_linear(X[~test], y[~test])
        manual.append(pair_auc(decision_scores(w, X[test]).tolist(), y[test].tolist()))
    assert rep.fold_aucs == pytest.approx(manual, abs=1e-12)
    assert cross_validate(toy, folds=3, seed=9).fold_aucs == rep.fold_aucs
    assert len(rep.fold_aucs) == 3 and all(0 <= a <= 1 for a in rep.fold_aucs)


def test_benchmark_table(rng):
    data = random_dataset(rng, n_range=(60, 80), d_range=(8, 10))
    reports = benchmark(data, ["greedy-hamdist", "laplace-dp"], k_list=(2, 4, 8), epsilon_list=(1.0,),
                        seed=1, folds=3, include_full=True)
    rows = list(csv.DictReader(io.StringIO(benchmark_csv(reports, include_time=False))))
    assert list(rows[0]) == ["method", "param", "sfc", "auc_mean", "auc_std", "time"]
    assert [r["method"] for r in rows] == ["greedy-hamdist"] * 3 + ["laplace-dp", "full"]
    sfc = [int(r["sfc"]) for r in rows[:3]]
    assert sfc == sorted(sfc, reverse=True)
    assert rows[-1]["sfc"] == str(data.d)
    assert all(r["time"] == "" for r in rows)
    again = benchmark(data, ["greedy-hamdist", "laplace-dp"], k_list=(2, 4, 8), epsilon_list=(1.0,),
                      seed=1, folds=3, include_full=True, workers=4)
    assert benchmark_csv(again, include_time=False) == benchmark_csv(reports, include_time=False)
    assert json.loads(benchmark_json(reports, include_time=False))[0]["method"] == "greedy-hamdist"


def test_sfc_non_increasing_in_k(rng):
    for _ in range(100):
        data = random_dataset(rng, n_range=(10, 40), d_range=(3, 12))
        sfc = [select(data, "greedy-hamdist", k=k).sfc for k in (1, 2, 3, 5, 8)]
        assert sfc == sorted(sfc, reverse=True)


def test_failed_cell_is_reported(toy):
    # 2 entities per class cannot be split into 5 stratified folds
    small = BinaryDataset.from_matrix([[1, 0], [0, 1], [1, 1], [0, 0]], [1, 1, 0, 0])
    reports = benchmark(small, ["greedy-hamdist"], k_list=(1,), folds=5)
    assert reports[0].status == "FAILED" and "fold" in reports[0].message
    assert "FAILED" in benchmark_csv(reports)
    with pytest.raises(ValueError):
        benchmark(toy, ["nope"])
