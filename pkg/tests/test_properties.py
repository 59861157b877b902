"""Randomized properties driven by hypothesis (shrinks to small counterexamples)."""

import warnings

import numpy as np
from hypothesis import given, settings, strategies as st

from acselect import (BinaryDataset, ac_of_dataset, dist_cnt, ham_dist, loads, dumps, mine_maximal, select,
                      support)
from acselect.selectors import verify_constraint
from generators import oracle_ac


@st.composite
def datasets(draw, max_n=12, max_d=6, both=True):
    n = draw(st.integers(2 if both else 1, max_n))
    d = draw(st.integers(1, max_d))
    m = draw(st.lists(st.lists(st.booleans(), min_size=d, max_size=d), min_size=n, max_size=n))
    y = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    if both:
        y[0], y[-1] = True, False
    return BinaryDataset.from_matrix(np.array(m, dtype=bool).reshape(n, d), y)


subsets = st.lists(st.integers(0, 5), unique=True)


@settings(max_examples=200, deadline=None)
@given(datasets(both=False), st.data())
def test_support_anti_monotone(data, draw):
    x = sorted(v for v in draw.draw(subsets) if v < data.d)
    y = sorted(set(x) | {v for v in draw.draw(subsets) if v < data.d})
    assert support(data, x) >= support(data, y)
    assert ac_of_dataset(data, x) >= ac_of_dataset(data, y)


@settings(max_examples=200, deadline=None)
@given(datasets(), st.data())
def test_utilities_bounded(data, draw):
    fs = sorted(v for v in draw.draw(subsets) if v < data.d)
    assert 0 <= dist_cnt(data, fs) <= 1
    assert dist_cnt(data, fs) <= ham_dist(data, fs) <= len(fs)


@settings(max_examples=150, deadline=None)
@given(datasets(), st.integers(1, 6), st.sampled_from(["maximal", "greedy-hamdist", "greedy-distcnt",
                                                       "cm-greedy", "kanon-hamdist", "kanon-distcnt"]))
def test_selectors_feasible(data, k, method):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = select(data, method, k=k)
    assert verify_constraint(data, res)
    if res.status != "infeasible" and res.constraint == "k-ac":
        assert oracle_ac(data.matrix, res.features.members) >= k


@settings(max_examples=150, deadline=None)
@given(datasets(both=False), st.integers(1, 4))
def test_maximal_sets_are_maximal(data, k):
    for fs, s in mine_maximal(data, k):
        assert support(data, fs) == s >= k
        for x in range(data.d):
            if x not in fs:
                assert support(data, fs.union([x])) < k


@settings(max_examples=100, deadline=None)
@given(datasets(both=False), st.sampled_from(["dense-csv", "sparse"]))
def test_serialization_round_trip(data, fmt):
    assert loads(dumps(data, fmt), fmt) == data
