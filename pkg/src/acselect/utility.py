"""Class-separation utilities for feature sets.

All pairwise quantities range over the cross-class pairs ``(a, b)`` with
``a`` POS and ``b`` NEG.  Values are exact :class:`fractions.Fraction`
objects built from integer pair counts, so modularity and submodularity can
be checked with equality rather than a tolerance.

* ``ham_dist``  - mean Hamming distance of projected cross-class pairs.  It is
  modular: the sum of per-feature contributions ``p1*n0 + p0*n1``.
* ``dist_cnt``  - fraction of cross-class pairs whose projections differ.
* ``cm_penalty`` - minority-class count summed over identical-projection
  groups (nothing is suppressed, so the suppression term is always 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import sparse

from .dataset import BinaryDataset, FeatureLike, as_feature_set

METRICS = ("hamdist", "distcnt", "cm")


class SingleClassError(ValueError):
    """Raised when a pairwise utility is requested on a one-class dataset."""


@dataclass(frozen=True)
class PairUniverse:
    pos: tuple[int, ...]
    neg: tuple[int, ...]

    @classmethod
    def of(cls, data: BinaryDataset) -> "PairUniverse":
        return cls(tuple(np.flatnonzero(data.labels).tolist()),
                   tuple(np.flatnonzero(~data.labels).tolist()))

    @property
    def pair_count(self) -> int:
        return len(self.pos) * len(self.neg)


def pair_count(data: BinaryDataset) -> int:
    pairs = data.n_pos * data.n_neg
    if pairs == 0:
        raise SingleClassError("both classes must be present for pairwise utilities")
    return pairs


def feature_contributions(data: BinaryDataset) -> np.ndarray:
    """Integer count of cross-class pairs each single feature separates."""
    pair_count(data)
    m = data.matrix.astype(np.int64)
    p1 = m[data.labels].sum(axis=0)
    n1 = m[~data.labels].sum(axis=0)
    p0 = data.n_pos - p1
    n0 = data.n_neg - n1
    return p1 * n0 + p0 * n1


def ham_dist(data: BinaryDataset, features: FeatureLike) -> Fraction:
    fs = as_feature_set(features, data.d)
    contrib = feature_contributions(data)
    return Fraction(int(contrib[list(fs.members)].sum()), pair_count(data))


def _group_counts(data: BinaryDataset, features: FeatureLike) -> dict[int, list[int]]:
    fmask = as_feature_set(features, data.d).mask
    groups: dict[int, list[int]] = {}
    for r, y in zip(data.rows, data.labels):
        g = groups.setdefault(r & fmask, [0, 0])
        g[0 if y else 1] += 1
    return groups


def dist_cnt(data: BinaryDataset, features: FeatureLike) -> Fraction:
    pairs = pair_count(data)
    same = sum(p * q for p, q in _group_counts(data, features).values())
    return Fraction(pairs - same, pairs)


def cm_penalty(data: BinaryDataset, features: FeatureLike) -> int:
    return sum(min(p, q) for p, q in _group_counts(data, features).values())


def utility_summary(data: BinaryDataset, features: FeatureLike) -> dict:
    out = {"cm_penalty": cm_penalty(data, features)}
    if data.n_pos and data.n_neg:
        out["ham_dist"] = ham_dist(data, features)
        out["dist_cnt"] = dist_cnt(data, features)
    return out


def entropy_score(p) -> float:
    """Shannon entropy (natural log) of a probability vector, ``0 ln 0 = 0``."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("expected a non-empty probability vector")
    if (p < 0).any():
        raise ValueError("probabilities must be non-negative")
    if abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum()) + 0.0


class GroupPartition:
    """Identical-projection groups of the current feature set.

    Entities carry a dense group id; adding a feature refines the partition.
    Gains for every candidate feature are computed at once from per-group
    POS/NEG counts of 1-bits (one sparse product per class).
    """

    _CHUNK = 4096

    def __init__(self, data: BinaryDataset, features: FeatureLike = ()):
        self.data = data
        self.members: tuple[int, ...] = ()
        self.group = np.zeros(data.n, dtype=np.int64)
        self.n_groups = 1 if data.n else 0
        for x in as_feature_set(features, data.d):
            self.add(x)

    @property
    def counts(self) -> tuple[np.ndarray, np.ndarray]:
        y = self.data.labels
        pos = np.bincount(self.group[y], minlength=self.n_groups)
        neg = np.bincount(self.group[~y], minlength=self.n_groups)
        return pos, neg

    @property
    def groups(self) -> dict[tuple[int, ...], tuple[int, int]]:
        """Map projected-row signature -> (pos_count, neg_count)."""
        pos, neg = self.counts
        rep = np.full(self.n_groups, -1)
        rep[self.group[::-1]] = np.arange(self.data.n)[::-1]
        cols = list(self.members)
        m = self.data.matrix
        return {tuple(int(v) for v in m[rep[g], cols]): (int(pos[g]), int(neg[g]))
                for g in range(self.n_groups)}

    def undistinguished(self) -> int:
        pos, neg = self.counts
        return int((pos * neg).sum())

    def cm_penalty(self) -> int:
        pos, neg = self.counts
        return int(np.minimum(pos, neg).sum())

    def _ones_by_group(self, candidates: np.ndarray):
        """Per (group, candidate) counts of POS and NEG entities with the bit set."""
        y = self.data.labels
        m = self.data.matrix
        n = self.data.n
        onehot = sparse.csr_matrix((np.ones(n, dtype=np.int64), (self.group, np.arange(n))),
                                   shape=(self.n_groups, n))
        pos_rows = onehot[:, y]
        neg_rows = onehot[:, ~y]
        for start in range(0, len(candidates), self._CHUNK):
            cand = candidates[start:start + self._CHUNK]
            sub = m[:, cand].astype(np.int64)
            yield cand, np.asarray(pos_rows @ sub[y]), np.asarray(neg_rows @ sub[~y])

    def candidates(self) -> np.ndarray:
        mask = np.ones(self.data.d, dtype=bool)
        mask[list(self.members)] = False
        return np.flatnonzero(mask)

    def gains(self, metric: str = "distcnt", candidates=None) -> tuple[np.ndarray, np.ndarray]:
        """Integer gain numerators for each candidate feature.

        ``distcnt``: newly separated cross-class pairs (divide by the pair
        count for the utility gain).  ``cm``: reduction of the CM penalty.
        """
        if metric not in ("distcnt", "cm"):
            raise ValueError(f"incremental gains support 'distcnt' and 'cm', not {metric!r}")
        cand = self.candidates() if candidates is None else np.asarray(candidates, dtype=np.int64)
        out = np.zeros(len(cand), dtype=np.int64)
        if len(cand) == 0:
            return cand, out
        pos, neg = self.counts
        pos, neg = pos[:, None], neg[:, None]
        offset = 0
        for chunk, p1, n1 in self._ones_by_group(cand):
            p0, n0 = pos - p1, neg - n1
            if metric == "distcnt":
                g = (p1 * n0 + p0 * n1).sum(axis=0)
            else:
                g = (np.minimum(pos, neg) - np.minimum(p1, n1) - np.minimum(p0, n0)).sum(axis=0)
            out[offset:offset + len(chunk)] = g
            offset += len(chunk)
        return cand, out

    def gain(self, metric: str, x: int):
        if x in self.members:
            raise ValueError(f"feature {x} is already in the set")
        _, g = self.gains(metric, [x])
        if metric == "distcnt":
            return Fraction(int(g[0]), pair_count(self.data))
        return int(g[0])

    def add(self, x: int) -> None:
        if x in self.members:
            raise ValueError(f"feature {x} is already in the set")
        if not 0 <= x < self.data.d:
            raise IndexError(f"feature index {x} out of range for d={self.data.d}")
        key = self.group * 2 + self.data.matrix[:, x]
        _, self.group = np.unique(key, return_inverse=True)
        self.group = self.group.astype(np.int64).ravel()
        self.n_groups = int(self.group.max()) + 1 if self.data.n else 0
        self.members = tuple(sorted((*self.members, x)))


def marginal_gain(metric: str, state, x: int) -> Fraction | int:
    """Exact gain of adding ``x``.

    ``state`` is the dataset for ``hamdist`` (the gain is modular and does not
    depend on the current set) and a :class:`GroupPartition` otherwise.
    """
    if metric == "hamdist":
        data = state.data if isinstance(state, GroupPartition) else state
        if isinstance(state, GroupPartition) and x in state.members:
            raise ValueError(f"feature {x} is already in the set")
        return Fraction(int(feature_contributions(data)[x]), pair_count(data))
    if not isinstance(state, GroupPartition):
        raise TypeError(f"{metric} gains need a GroupPartition state")
    return state.gain(metric, x)

