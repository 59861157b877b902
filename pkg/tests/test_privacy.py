import json

import numpy as np
import pytest

from acselect import (ACState, ac_of_dataset, ac_of_entity, audit, per_entity_ac, satisfies_k_ac,
                      satisfies_k_anonymity)
from acselect.privacy import extend, kanon_class_sizes
from generators import oracle_ac, oracle_entity_ac, random_dataset, random_subset


def test_entity_ac_counts_itself(toy):
    # e3 = {x1, x4, x5} is contained in e6's row only
    assert ac_of_entity(toy, 2) == 2
    assert ac_of_entity(toy, 2, toy.features(["x1", "x5"])) == 6


def test_empty_feature_set_gives_n(toy):
    assert ac_of_dataset(toy, ()) == toy.n
    assert satisfies_k_ac(toy, (), toy.n)
    assert not satisfies_k_ac(toy, (), toy.n + 1)


def test_ac_matches_oracle(rng):
    for _ in range(200):
        data = random_dataset(rng, both_classes=False)
        fs = random_subset(rng, data.d)
        assert per_entity_ac(data, fs).tolist() == oracle_entity_ac(data.matrix, fs).tolist()


def test_kac_is_weaker_than_kanonymity(toy):
    # full toy: AC is 1 and so is the smallest class
    assert not satisfies_k_anonymity(toy, None, 2)
    fs = toy.features(["x1", "x3", "x5"])
    assert satisfies_k_ac(toy, fs, 2)
    assert not satisfies_k_anonymity(toy, fs, 3)
    assert satisfies_k_ac(toy, fs, 4)


def test_acstate_extend(toy):
    state = ACState(toy)
    assert state.dataset_ac == 6
    for x in (4, 0, 2):
        state, ac = extend(state, x)
        assert ac == ac_of_dataset(toy, state.members)
    assert state.members == (0, 2, 4)
    with pytest.raises(ValueError):
        state.extend(2)
    with pytest.raises(IndexError):
        state.extend(9)


def test_acstate_is_immutable_on_extend(toy):
    base = ACState(toy, [0])
    before = base.per_entity_ac().copy()
    base.extend(3)
    assert np.array_equal(base.per_entity_ac(), before)


def test_audit_report(toy):
    rep = audit(toy, k=2)
    doc = json.loads(rep.to_json())
    assert doc["dataset_ac"] == 1
    assert doc["per_entity_ac"] == [4, 4, 2, 4, 1, 1]
    assert doc["class_size_histogram"] == {"1": 3, "3": 1}
    assert doc["satisfied"] is False
    assert sum(int(s) * c for s, c in doc["class_size_histogram"].items()) == toy.n


def test_kanon_class_sizes(toy):
    sizes = kanon_class_sizes(toy, toy.features(["x3", "x4", "x5"]))
    assert sizes == [2, 4]


def test_satisfies_kac_early_exit_agrees(rng):
    for _ in range(200):
        data = random_dataset(rng, both_classes=False)
        fs = random_subset(rng, data.d)
        k = int(rng.integers(1, data.n + 2))
        assert satisfies_k_ac(data, fs, k) == (k <= data.n and oracle_ac(data.matrix, fs) >= k)
