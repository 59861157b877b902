from fractions import Fraction

import numpy as np
import pytest

from acselect import BinaryDataset, GroupPartition, cm_penalty, dist_cnt, entropy_score, ham_dist, marginal_gain
from acselect.utility import SingleClassError, feature_contributions, utility_summary
from generators import oracle_cm, oracle_pair_distinct, random_dataset, random_subset


def test_toy_values(toy):
    fs1 = toy.features(["x1", "x2", "x5"])
    fs2 = toy.features(["x3", "x4", "x5"])
    assert dist_cnt(toy, fs1) == Fraction(6, 9)
    assert dist_cnt(toy, fs2) == Fraction(4, 9)
    assert cm_penalty(toy, fs1) == 1
    assert cm_penalty(toy, ()) == 3
    assert ham_dist(toy, ()) == 0
    assert feature_contributions(toy).tolist() == [0, 6, 4, 4, 0]


def test_single_class_rejected():
    data = BinaryDataset.from_matrix([[1, 0], [0, 1]], [1, 1])
    with pytest.raises(SingleClassError):
        ham_dist(data, [0])
    assert "ham_dist" not in utility_summary(data, [0])


def test_cm_matches_oracle(rng):
    for _ in range(200):
        data = random_dataset(rng)
        fs = random_subset(rng, data.d)
        assert cm_penalty(data, fs) == oracle_cm(data.matrix, data.labels, fs)
        assert float(dist_cnt(data, fs)) == pytest.approx(oracle_pair_distinct(data.matrix, data.labels, fs),
                                                         abs=1e-12)


def test_group_partition_state(toy):
    part = GroupPartition(toy, toy.features(["x1", "x2", "x5"]))
    assert part.groups == {(1, 0, 1): (3, 1), (1, 1, 1): (0, 2)}
    assert part.cm_penalty() == 1
    assert part.undistinguished() == 3
    assert part.gain("distcnt", 2) == Fraction(1, 9)
    assert marginal_gain("distcnt", part, 2) == Fraction(1, 9)
    assert marginal_gain("hamdist", toy, 1) == Fraction(6, 9)
    with pytest.raises(ValueError):
        part.gain("distcnt", 0)
    with pytest.raises(TypeError):
        marginal_gain("distcnt", toy, 0)


def test_gains_chunking_matches(rng):
    data = random_dataset(rng, n_range=(20, 40), d_range=(8, 10))
    part = GroupPartition(data, [0])
    cand, full = part.gains("distcnt")
    part._CHUNK = 3
    cand2, chunked = part.gains("distcnt")
    assert np.array_equal(cand, cand2) and np.array_equal(full, chunked)


def test_entropy_score():
    assert entropy_score([1.0, 0.0]) == 0.0
    assert entropy_score([0.5, 0.5]) == pytest.approx(np.log(2))
    with pytest.raises(ValueError):
        entropy_score([0.5, 0.6])
    with pytest.raises(ValueError):
        entropy_score([1.5, -0.5])
