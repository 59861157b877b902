"""Shared fixtures data and independent numpy oracles for the test suite.

The oracles work on dense 0/1 arrays only and never call into the package's
bitset code, so they give a second route to every quantity under test.
"""

import numpy as np

from acselect import BinaryDataset

TOY_TEXT = """x1,x2,x3,x4,x5,label
1,0,1,0,1,+1
1,0,1,0,1,-1
1,0,0,1,1,+1
1,0,1,0,1,+1
1,1,1,0,1,-1
1,1,0,1,1,-1
"""


def toy_matrix():
    m = np.array([[1, 0, 1, 0, 1],
                  [1, 0, 1, 0, 1],
                  [1, 0, 0, 1, 1],
                  [1, 0, 1, 0, 1],
                  [1, 1, 1, 0, 1],
                  [1, 1, 0, 1, 1]], dtype=bool)
    y = np.array([1, 0, 1, 1, 0, 0], dtype=bool)
    return m, y


def toy_dataset():
    m, y = toy_matrix()
    return BinaryDataset.from_matrix(m, y, [f"x{i}" for i in range(1, 6)])


def random_dataset(rng, n_range=(2, 40), d_range=(1, 10), both_classes=True):
    """Random binary dataset with a random per-instance density."""
    while True:
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        d = int(rng.integers(d_range[0], d_range[1] + 1))
        density = rng.uniform(0.15, 0.85)
        m = rng.random((n, d)) < density
        # duplicate a few rows so that larger k values stay reachable
        if n > 3 and rng.random() < 0.5:
            src = rng.integers(0, n, size=n // 3)
            dst = rng.integers(0, n, size=n // 3)
            m[dst] = m[src]
        y = rng.random(n) < rng.uniform(0.3, 0.7)
        if both_classes and (y.all() or not y.any()):
            continue
        return BinaryDataset.from_matrix(m, y)


def random_subset(rng, d, p=0.5):
    return [x for x in range(d) if rng.random() < p]


# -- oracles --------------------------------------------------------------------------

def oracle_entity_ac(m, cols):
    """AC of every entity: rows whose projection dominates its own (itself included)."""
    p = np.asarray(m, dtype=bool)[:, list(cols)]
    return (p[None, :, :] >= p[:, None, :]).all(axis=-1).sum(axis=1)


def oracle_ac(m, cols):
    return int(oracle_entity_ac(m, cols).min())


def oracle_class_sizes(m, cols):
    p = np.asarray(m, dtype=bool)[:, list(cols)]
    same = (p[None, :, :] == p[:, None, :]).all(axis=-1)
    return same.sum(axis=1)


def oracle_kanon(m, cols):
    return int(oracle_class_sizes(m, cols).min())


def oracle_pair_hamming(m, y, cols):
    """Mean Hamming distance between projected POS and NEG rows (float)."""
    p = np.asarray(m, dtype=float)[:, list(cols)]
    a, b = p[y], p[~y]
    return float(np.abs(a[:, None, :] - b[None, :, :]).sum(axis=-1).mean())


def oracle_pair_distinct(m, y, cols):
    """Share of POS/NEG pairs whose projections differ (float)."""
    p = np.asarray(m, dtype=bool)[:, list(cols)]
    same = (p[y][:, None, :] == p[~y][None, :, :]).all(axis=-1)
    return float(1.0 - same.mean())


def oracle_cm(m, y, cols):
    p = np.asarray(m, dtype=bool)[:, list(cols)]
    keys = [tuple(r) for r in p.tolist()]
    groups = {}
    for key, lab in zip(keys, y.tolist()):
        groups.setdefault(key, [0, 0])[0 if lab else 1] += 1
    return sum(min(a, b) for a, b in groups.values())
