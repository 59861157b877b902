"""Maximal frequent itemset mining over the containment-set transactions.

Each entity is a transaction holding its containment set.  An itemset with
support >= k is a feasible feature set for k-AC, and every subset of it is
too, so the maximal frequent itemsets summarize the feasible region.

:func:`mine_maximal` is a depth-first miner on vertical tidsets (``int``
bitsets over entities) with the usual MAFIA-style pruning:

* parent equivalence: a tail item whose tidset contains the head's tidset is
  moved into the head without branching;
* head-union-tail: if ``head | tail`` is itself frequent it is the only
  maximal candidate of the subtree;
* subsumption: a subtree whose ``head | tail`` is covered by an already found
  maximal set is skipped.

:func:`brute_force_maximal` enumerates all ``2**d`` itemsets with a superset
sum transform and is the test oracle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ._bits import iter_bits, popcount
from .dataset import BinaryDataset, FeatureLike, FeatureSet, as_feature_set

BRUTE_FORCE_MAX_D = 20


@dataclass
class MaximalCollection:
    sets: list[tuple[FeatureSet, int]]
    min_support: int
    truncated: bool = False

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    @property
    def feature_sets(self) -> list[FeatureSet]:
        return [fs for fs, _ in self.sets]

    def downset(self, include_empty: bool = False) -> set[FeatureSet]:
        """All subsets of the maximal sets, i.e. every frequent itemset."""
        out: set[int] = set()
        for fs, _ in self.sets:
            m = fs.mask
            sub = m
            while True:
                out.add(sub)
                if sub == 0:
                    break
                sub = (sub - 1) & m
        if not include_empty:
            out.discard(0)
        return {FeatureSet.from_mask(m) for m in out}

    def to_lines(self, data: BinaryDataset) -> str:
        return "".join(f"{s}\t{','.join(fs.names(data))}\n" for fs, s in self.sets)

    def to_json(self, data: BinaryDataset) -> str:
        doc = {
            "min_support": self.min_support,
            "truncated": self.truncated,
            "sets": [{"support": s, "features": fs.names(data), "indices": list(fs.members)}
                     for fs, s in self.sets],
        }
        return json.dumps(doc, indent=2) + "\n"


def _ordered(found: dict[int, int], k: int, truncated: bool = False) -> MaximalCollection:
    sets = [(FeatureSet.from_mask(m), s) for m, s in found.items()]
    sets.sort(key=lambda t: (-len(t[0]), t[0].members))
    return MaximalCollection(sets, k, truncated)


def support(data: BinaryDataset, features: FeatureLike) -> int:
    """Number of entities whose containment set includes every feature given."""
    fs = as_feature_set(features, data.d)
    tids = data.all_entities
    for x in fs:
        tids &= data.columns[x]
    return popcount(tids)


class _ResultCap(Exception):
    pass


def mine_maximal(data: BinaryDataset, k: int, max_results: int | None = None) -> MaximalCollection:
    """Maximal itemsets with support >= ``k``, largest first then lexicographic.

    ``max_results`` bounds the number of sets collected; when it is reached the
    returned collection has ``truncated=True``.
    """
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if k > data.n:
        return MaximalCollection([], k)

    cols = data.columns
    items = [x for x in range(data.d) if popcount(cols[x]) >= k]
    items.sort(key=lambda x: (popcount(cols[x]), x))

    found: dict[int, int] = {}
    # subsumption index: maximal sets bucketed by every item they contain
    by_item: dict[int, list[int]] = {x: [] for x in items}
    all_found: list[int] = []

    def covered(mask: int) -> bool:
        if mask == 0:
            return bool(all_found)
        low = mask & -mask
        for m in by_item.get(low.bit_length() - 1, ()):
            if m & mask == mask:
                return True
        return False

    def record(mask: int, sup: int) -> None:
        if covered(mask):
            return
        if max_results is not None and len(found) >= max_results:
            raise _ResultCap
        found[mask] = sup
        all_found.append(mask)
        for x in iter_bits(mask):
            by_item[x].append(mask)

    def is_maximal(head: int, tids: int) -> bool:
        for x in items:
            if not head >> x & 1 and popcount(tids & cols[x]) >= k:
                return False
        return True

    def dfs(head: int, tids: int, tail: list[int]) -> None:
        exts = []
        for x in tail:
            t = tids & cols[x]
            c = popcount(t)
            if c >= k:
                if t == tids:
                    head |= 1 << x
                else:
                    exts.append((c, x, t))
        hut = head
        for _, x, _ in exts:
            hut |= 1 << x
        if covered(hut):
            return
        if exts:
            hut_tids = tids
            for _, _, t in exts:
                hut_tids &= t
            if popcount(hut_tids) >= k:
                if is_maximal(hut, hut_tids):
                    record(hut, popcount(hut_tids))
                return
        exts.sort(key=lambda e: (e[0], e[1]))
        for i, (_, x, t) in enumerate(exts):
            dfs(head | 1 << x, t, [y for _, y, _ in exts[i + 1:]])
        if is_maximal(head, tids):
            record(head, popcount(tids))

    truncated = False
    try:
        dfs(0, data.all_entities, items)
    except _ResultCap:
        truncated = True
    return _ordered(found, k, truncated)


def _superset_supports(data: BinaryDataset) -> np.ndarray:
    """``out[m]`` = number of rows containing every bit of ``m``."""
    d = data.d
    if d > BRUTE_FORCE_MAX_D:
        raise ValueError(f"brute force needs d <= {BRUTE_FORCE_MAX_D}, got d={d}")
    f = np.bincount(np.array(data.rows, dtype=np.int64), minlength=1 << d).astype(np.int64)
    idx = np.arange(1 << d)
    for i in range(d):
        lacking = (idx >> i & 1) == 0
        f[lacking] += f[idx[lacking] | (1 << i)]
    return f


def frequent_itemsets(data: BinaryDataset, k: int, include_empty: bool = False) -> list[FeatureSet]:
    """Every itemset with support >= k, by exhaustive enumeration."""
    sup = _superset_supports(data)
    masks = np.flatnonzero(sup >= k)
    out = [FeatureSet.from_mask(int(m)) for m in masks if include_empty or m]
    out.sort(key=lambda fs: (len(fs), fs.members))
    return out


def brute_force_maximal(data: BinaryDataset, k: int) -> MaximalCollection:
    """Exhaustive oracle for :func:`mine_maximal` (requires d <= 20)."""
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    sup = _superset_supports(data)
    frequent = sup >= k
    idx = np.arange(1 << data.d)
    has_frequent_parent = np.zeros_like(frequent)
    for i in range(data.d):
        lacking = (idx >> i & 1) == 0
        has_frequent_parent[lacking] |= frequent[idx[lacking] | (1 << i)]
    maximal = np.flatnonzero(frequent & ~has_frequent_parent)
    return _ordered({int(m): int(sup[m]) for m in maximal}, k)
