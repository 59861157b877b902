"""Anonymity by containment (AC) and classical k-anonymity checks.

``AC(e)`` counts the entities whose containment set is a superset of ``e``'s,
*including e itself*, so it is the size of e's anonymity group and is always
at least 1.  ``AC(D)`` is the minimum over entities.

All checks work on projections without materializing them: the support set
of a projected row ``m`` is the AND of the column bitsets of the features in
``m``, and its popcount is the AC shared by every entity with that row.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ._bits import iter_bits, popcount
from .dataset import BinaryDataset, FeatureLike, as_feature_set


def _check_k(k: int) -> None:
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")


def _support_set(data: BinaryDataset, row_mask: int) -> int:
    tids = data.all_entities
    cols = data.columns
    for x in iter_bits(row_mask):
        tids &= cols[x]
        if not tids:
            break
    return tids


def _projected_row_counts(data: BinaryDataset, features: FeatureLike | None) -> Counter:
    fmask = as_feature_set(features, data.d).mask
    return Counter(r & fmask for r in data.rows)


def ac_of_entity(data: BinaryDataset, entity: int, features: FeatureLike | None = None) -> int:
    """Largest k for which ``entity`` satisfies k-AC (on the projection, if given)."""
    if not 0 <= entity < data.n:
        raise IndexError(f"entity {entity} out of range for n={data.n}")
    fmask = as_feature_set(features, data.d).mask
    return popcount(_support_set(data, data.rows[entity] & fmask))


def per_entity_ac(data: BinaryDataset, features: FeatureLike | None = None) -> np.ndarray:
    fmask = as_feature_set(features, data.d).mask
    cache: dict[int, int] = {}
    out = np.empty(data.n, dtype=np.int64)
    for e, r in enumerate(data.rows):
        m = r & fmask
        if m not in cache:
            cache[m] = popcount(_support_set(data, m))
        out[e] = cache[m]
    return out


def ac_of_dataset(data: BinaryDataset, features: FeatureLike | None = None) -> int:
    if data.n == 0:
        raise ValueError("AC is undefined for an empty dataset")
    return min(popcount(_support_set(data, m)) for m in _projected_row_counts(data, features))


def satisfies_k_ac(data: BinaryDataset, features: FeatureLike | None, k: int) -> bool:
    """True iff ``AC(project(data, features)) >= k``."""
    _check_k(k)
    if k > data.n:
        return False
    for m in _projected_row_counts(data, features):
        if popcount(_support_set(data, m)) < k:
            return False
    return True


def kanon_class_sizes(data: BinaryDataset, features: FeatureLike | None = None) -> list[int]:
    """Sizes of the identical-row equivalence classes of the projection."""
    return sorted(_projected_row_counts(data, features).values())


def satisfies_k_anonymity(data: BinaryDataset, features: FeatureLike | None, k: int) -> bool:
    _check_k(k)
    return min(_projected_row_counts(data, features).values(), default=0) >= k


class ACState:
    """Incremental AC engine for a growing feature set.

    Entities with identical projected rows share one group.  Each group
    stores its member bitset and its supporter bitset (entities whose
    projected containment set is a superset of the group's row).  Adding a
    feature ``x`` splits every group by ``x``; the half having ``x`` has its
    supporters intersected with ``x``'s column, the other half is untouched.
    """

    __slots__ = ("data", "members", "groups")

    def __init__(self, data: BinaryDataset, features: FeatureLike | None = (), *, _groups=None):
        self.data = data
        fs = as_feature_set(features, data.d)
        self.members = fs.members
        if _groups is not None:
            self.groups = _groups
            return
        groups: dict[int, list[int]] = {}
        fmask = fs.mask
        for e, r in enumerate(data.rows):
            m = r & fmask
            groups.setdefault(m, [0, 0])[0] |= 1 << e
        self.groups = {m: (ents, _support_set(data, m)) for m, (ents, _) in groups.items()}

    @property
    def dataset_ac(self) -> int:
        return min(popcount(sup) for _, sup in self.groups.values())

    @property
    def min_class_size(self) -> int:
        """Smallest identical-row class, i.e. the achieved classical k-anonymity."""
        return min(popcount(ents) for ents, _ in self.groups.values())

    def extend(self, x: int) -> "ACState":
        if x in self.members:
            raise ValueError(f"feature {x} is already in the set")
        if not 0 <= x < self.data.d:
            raise IndexError(f"feature index {x} out of range for d={self.data.d}")
        col = self.data.columns[x]
        bit = 1 << x
        groups = {}
        for m, (ents, sup) in self.groups.items():
            with_x = ents & col
            without_x = ents & ~col
            if with_x:
                groups[m | bit] = (with_x, sup & col)
            if without_x:
                groups[m] = (without_x, sup)
        members = tuple(sorted((*self.members, x)))
        return ACState(self.data, members, _groups=groups)

    def per_entity_ac(self) -> np.ndarray:
        out = np.empty(self.data.n, dtype=np.int64)
        for ents, sup in self.groups.values():
            out[list(iter_bits(ents))] = popcount(sup)
        return out


def incremental_ac_state(data: BinaryDataset, features: FeatureLike | None = ()) -> ACState:
    return ACState(data, features)


def extend(state: ACState, x: int) -> tuple[ACState, int]:
    new = state.extend(x)
    return new, new.dataset_ac


@dataclass
class PrivacyAudit:
    per_entity_ac: list[int]
    dataset_ac: int
    kanon_class_sizes: dict[int, int]
    k_checked: int | None = None
    satisfied: bool | None = None
    features: list[int] = field(default_factory=list)

    @property
    def kanonymity(self) -> int:
        return min(self.kanon_class_sizes, default=0)

    def to_dict(self) -> dict:
        return {
            "dataset_ac": self.dataset_ac,
            "per_entity_ac": list(self.per_entity_ac),
            "class_size_histogram": {str(s): c for s, c in sorted(self.kanon_class_sizes.items())},
            "k": self.k_checked,
            "satisfied": self.satisfied,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def audit(data: BinaryDataset, features: FeatureLike | None = None, k: int | None = None) -> PrivacyAudit:
    """AC per entity, dataset AC and the k-anonymity class-size histogram."""
    if data.n == 0:
        raise ValueError("cannot audit an empty dataset")
    if k is not None:
        _check_k(k)
    fs = as_feature_set(features, data.d)
    ac = per_entity_ac(data, fs)
    hist = Counter(kanon_class_sizes(data, fs))
    dataset_ac = int(ac.min())
    return PrivacyAudit(
        per_entity_ac=ac.tolist(),
        dataset_ac=dataset_ac,
        kanon_class_sizes=dict(sorted(hist.items())),
        k_checked=k,
        satisfied=None if k is None else dataset_ac >= k,
        features=list(fs.members),
    )
