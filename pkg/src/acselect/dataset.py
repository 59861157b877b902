"""Binary labelled datasets: representation, projection and file formats.

Two on-disk formats are supported:

``dense-csv``
    Header row of feature names followed by a ``label`` column; one row per
    entity with cells in ``{0, 1}``.

``sparse``
    A ``#features <d>`` header (optionally followed by ``#names a,b,...``),
    then one line per entity: ``<label> <i1> <i2> ...`` listing the strictly
    increasing 1-based indices of the features set to 1.

Label tokens ``+1/-1``, ``1/0`` and ``POS/NEG`` are accepted and normalized;
writers always emit ``+1``/``-1``.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from ._bits import full_mask, iter_bits, mask_of, pack_rows, unpack_rows

POS = True
NEG = False

LABEL_TOKENS = {
    "+1": POS, "1": POS, "POS": POS, "pos": POS,
    "-1": NEG, "0": NEG, "NEG": NEG, "neg": NEG,
}

FORMATS = ("dense-csv", "sparse")


class DataFormatError(ValueError):
    """Raised when an input file cannot be parsed.

    ``line`` is the 1-based line number of the offending input, when known.
    """

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None):
        self.message = message
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
        if line is not None:
            where = f"{where}:{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


@dataclass(frozen=True)
class FeatureSet:
    """Duplicate-free, ascending tuple of feature indices."""

    members: tuple[int, ...] = ()

    def __post_init__(self):
        members = tuple(int(m) for m in self.members)
        for a, b in zip(members, members[1:]):
            if not a < b:
                raise ValueError(f"feature indices must be strictly increasing, got {members}")
        if members and members[0] < 0:
            raise ValueError(f"negative feature index {members[0]}")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, features: Iterable[int]) -> "FeatureSet":
        items = [int(f) for f in features]
        if len(set(items)) != len(items):
            raise ValueError(f"duplicate feature indices in {items}")
        return cls(tuple(sorted(items)))

    @classmethod
    def from_mask(cls, mask: int) -> "FeatureSet":
        return cls(tuple(iter_bits(mask)))

    @cached_property
    def mask(self) -> int:
        return mask_of(self.members)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        return x in self.members

    def union(self, other: Iterable[int]) -> "FeatureSet":
        return FeatureSet.from_mask(self.mask | mask_of(other))

    def names(self, data: "BinaryDataset") -> list[str]:
        return [data.feature_names[i] for i in self.members]


FeatureLike = Union[FeatureSet, Iterable[int]]


def as_feature_set(features: FeatureLike | None, d: int) -> FeatureSet:
    """Normalize ``features`` (``None`` meaning all ``d`` features) and range-check."""
    if features is None:
        return FeatureSet(tuple(range(d)))
    fs = features if isinstance(features, FeatureSet) else FeatureSet.of(features)
    if fs.members and fs.members[-1] >= d:
        raise IndexError(f"feature index {fs.members[-1]} out of range for d={d}")
    return fs


@dataclass(frozen=True)
class ContainmentSet:
    entity: int
    features: FeatureSet


@dataclass(frozen=True, eq=False)
class BinaryDataset:
    """Entities x binary features, with a binary class label per entity.

    Rows are held as packed ``int`` bitsets (bit ``j`` set when the entity
    has feature ``j``).  ``labels`` is a boolean array, ``True`` for POS.
    Instances are immutable; derived views (dense matrix, column bitsets)
    are computed once on demand.
    """

    rows: tuple[int, ...]
    labels: np.ndarray
    d: int
    feature_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        labels = np.asarray(self.labels, dtype=bool).copy()
        labels.setflags(write=False)
        if labels.ndim != 1 or len(labels) != len(rows):
            raise ValueError(f"got {len(labels)} labels for {len(rows)} rows")
        if self.d < 0:
            raise ValueError("d must be non-negative")
        limit = 1 << self.d
        for i, r in enumerate(rows):
            if r < 0 or r >= limit:
                raise ValueError(f"row {i} has bits outside [0, {self.d})")
        names = tuple(self.feature_names) or default_feature_names(self.d)
        if len(names) != self.d:
            raise ValueError(f"{len(names)} feature names for d={self.d}")
        if len(set(names)) != len(names):
            raise ValueError("feature names must be unique")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", names)

    @classmethod
    def from_matrix(cls, matrix, labels, feature_names: Sequence[str] | None = None) -> "BinaryDataset":
        m = np.asarray(matrix)
        if m.ndim != 2:
            raise ValueError("matrix must be 2-dimensional")
        if m.size and not np.isin(m, (0, 1)).all():
            raise ValueError("matrix cells must be 0 or 1")
        return cls(pack_rows(m.astype(np.uint8)), np.asarray(labels, dtype=bool), m.shape[1],
                   tuple(feature_names) if feature_names is not None else ())

    @property
    def n(self) -> int:
        return len(self.rows)

    @cached_property
    def matrix(self) -> np.ndarray:
        m = unpack_rows(self.rows, self.d)
        m.setflags(write=False)
        return m

    @cached_property
    def columns(self) -> tuple[int, ...]:
        """Vertical view: bit ``e`` of ``columns[j]`` is set when entity ``e`` has feature ``j``."""
        if self.n == 0:
            return tuple(0 for _ in range(self.d))
        return pack_rows(self.matrix.T)

    @cached_property
    def all_entities(self) -> int:
        return full_mask(self.n)

    @cached_property
    def pos_mask(self) -> int:
        return mask_of(np.flatnonzero(self.labels).tolist())

    @cached_property
    def neg_mask(self) -> int:
        return mask_of(np.flatnonzero(~self.labels).tolist())

    @property
    def n_pos(self) -> int:
        return int(self.labels.sum())

    @property
    def n_neg(self) -> int:
        return self.n - self.n_pos

    def __eq__(self, other):
        if not isinstance(other, BinaryDataset):
            return NotImplemented
        return (self.d == other.d and self.rows == other.rows
                and self.feature_names == other.feature_names
                and np.array_equal(self.labels, other.labels))

    def __hash__(self):
        return hash((self.d, self.rows, self.feature_names, self.labels.tobytes()))

    def __repr__(self):
        return f"BinaryDataset(n={self.n}, d={self.d}, pos={self.n_pos}, neg={self.n_neg})"

    def feature_index(self, name: str) -> int:
        try:
            return self.feature_names.index(name)
        except ValueError:
            raise KeyError(f"unknown feature {name!r}") from None

    def features(self, spec: Iterable[int | str]) -> FeatureSet:
        """Build a FeatureSet from indices or feature names."""
        return as_feature_set([self.feature_index(s) if isinstance(s, str) else int(s) for s in spec], self.d)


def default_feature_names(d: int) -> tuple[str, ...]:
    return tuple(f"f{i + 1}" for i in range(d))


def project(data: BinaryDataset, features: FeatureLike) -> BinaryDataset:
    """Keep only the columns in ``features``, in ascending index order."""
    fs = as_feature_set(features, data.d)
    members = fs.members
    if members == tuple(range(data.d)):
        return data
    rows = pack_rows(data.matrix[:, list(members)])
    return BinaryDataset(tuple(rows), data.labels, len(members),
                         tuple(data.feature_names[x] for x in members))


def containment_set(data: BinaryDataset, entity: int) -> ContainmentSet:
    if not 0 <= entity < data.n:
        raise IndexError(f"entity {entity} out of range for n={data.n}")
    return ContainmentSet(entity, FeatureSet.from_mask(data.rows[entity]))


def _parse_label(token: str, path, line) -> bool:
    try:
        return LABEL_TOKENS[token.strip()]
    except KeyError:
        raise DataFormatError(f"unknown label token {token!r}", path=path, line=line) from None


def _read_dense(text: str, path) -> BinaryDataset:
    reader = csv.reader(io.StringIO(text))
    rows_in = [(i + 1, r) for i, r in enumerate(reader) if any(c.strip() for c in r)]
    if not rows_in:
        raise DataFormatError("empty file", path=path)
    header_line, header = rows_in[0]
    header = [h.strip() for h in header]
    if not header or header[-1] != "label":
        raise DataFormatError("last header column must be 'label'", path=path, line=header_line)
    names = header[:-1]
    d = len(names)
    if d == 0:
        raise DataFormatError("no feature columns", path=path, line=header_line)
    if len(set(names)) != d:
        raise DataFormatError("duplicate feature names in header", path=path, line=header_line)
    rows, labels = [], []
    for lineno, cells in rows_in[1:]:
        if len(cells) != d + 1:
            raise DataFormatError(f"expected {d + 1} cells, got {len(cells)}", path=path, line=lineno)
        r = 0
        for j, cell in enumerate(cells[:-1]):
            c = cell.strip()
            if c == "1":
                r |= 1 << j
            elif c != "0":
                raise DataFormatError(f"non-binary cell {c!r} in column {names[j]!r}", path=path, line=lineno)
        rows.append(r)
        labels.append(_parse_label(cells[-1], path, lineno))
    if not rows:
        raise DataFormatError("no data rows", path=path)
    return BinaryDataset(tuple(rows), np.array(labels, dtype=bool), d, tuple(names))


def _read_sparse(text: str, path) -> BinaryDataset:
    d = None
    names = None
    rows, labels = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(" ")
            if key == "features":
                if d is not None or rows:
                    raise DataFormatError("misplaced #features header", path=path, line=lineno)
                try:
                    d = int(value)
                except ValueError:
                    raise DataFormatError(f"bad feature count {value!r}", path=path, line=lineno) from None
                if d < 1:
                    raise DataFormatError("feature count must be >= 1", path=path, line=lineno)
            elif key == "names":
                names = [s.strip() for s in value.split(",")]
            continue
        if d is None:
            raise DataFormatError("missing '#features <d>' header", path=path, line=lineno)
        tokens = line.split()
        label = _parse_label(tokens[0], path, lineno)
        r, prev = 0, 0
        for tok in tokens[1:]:
            try:
                idx = int(tok)
            except ValueError:
                raise DataFormatError(f"bad feature index {tok!r}", path=path, line=lineno) from None
            if idx <= prev:
                raise DataFormatError("feature indices must be strictly increasing and >= 1", path=path, line=lineno)
            if idx > d:
                raise DataFormatError(f"feature index {idx} exceeds d={d}", path=path, line=lineno)
            r |= 1 << (idx - 1)
            prev = idx
        rows.append(r)
        labels.append(label)
    if d is None:
        raise DataFormatError("empty file", path=path)
    if not rows:
        raise DataFormatError("no data rows", path=path)
    if names is not None and len(names) != d:
        raise DataFormatError(f"#names lists {len(names)} names for d={d}", path=path)
    return BinaryDataset(tuple(rows), np.array(labels, dtype=bool), d, tuple(names) if names else ())


def loads(text: str, format: str = "dense-csv", *, path: str | None = None) -> BinaryDataset:
    if format == "dense-csv":
        return _read_dense(text, path)
    if format == "sparse":
        return _read_sparse(text, path)
    raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")


def load(path: str | os.PathLike, format: str = "dense-csv") -> BinaryDataset:
    """Read a dataset file; raises :class:`DataFormatError` on malformed input."""
    p = Path(path)
    return loads(p.read_text(), format, path=str(p))


def dumps(data: BinaryDataset, format: str = "dense-csv") -> str:
    out = []
    if format == "dense-csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([*data.feature_names, "label"])
        for r, y in zip(data.rows, data.labels):
            w.writerow([*((r >> j) & 1 for j in range(data.d)), "+1" if y else "-1"])
        return buf.getvalue()
    if format == "sparse":
        out.append(f"#features {data.d}")
        if data.feature_names != default_feature_names(data.d):
            if any("," in name or "\n" in name for name in data.feature_names):
                raise ValueError("feature names containing ',' cannot be written in sparse format")
            out.append("#names " + ",".join(data.feature_names))
        for r, y in zip(data.rows, data.labels):
            out.append(" ".join(["+1" if y else "-1", *(str(j + 1) for j in iter_bits(r))]))
        return "\n".join(out) + "\n"
    raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")


def write(data: BinaryDataset, path: str | os.PathLike, format: str = "dense-csv") -> None:
    """Write atomically: the target is either fully written or untouched."""
    atomic_write_text(path, dumps(data, format))


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    p = Path(path)
    tmp = p.with_name(f".{p.name}.{os.getpid()}.tmp")
    try:
        with open(tmp, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, p)
    finally:
        if tmp.exists():
            tmp.unlink()
