"""Small helpers for Python ``int`` bitsets.

Bit ``i`` of an int stands for element ``i`` (feature index for row masks,
entity index for column masks).  ``int`` is arbitrary precision, so AND/OR
and ``bit_count`` run word-parallel over any width.
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np


def popcount(x: int) -> int:
    return x.bit_count()


def iter_bits(x: int) -> Iterator[int]:
    """Yield the indices of set bits in ascending order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def full_mask(width: int) -> int:
    return (1 << width) - 1


def pack_rows(matrix: np.ndarray) -> tuple[int, ...]:
    """Pack each row of a 0/1 matrix into an int (bit j = column j)."""
    if matrix.shape[1] == 0:
        return tuple(0 for _ in range(matrix.shape[0]))
    packed = np.packbits(np.ascontiguousarray(matrix, dtype=np.uint8), axis=1, bitorder="little")
    return tuple(int.from_bytes(row.tobytes(), "little") for row in packed)


def unpack_rows(rows: Iterable[int], width: int) -> np.ndarray:
    rows = list(rows)
    out = np.zeros((len(rows), width), dtype=np.uint8)
    if width == 0 or not rows:
        return out
    nbytes = (width + 7) // 8
    buf = b"".join(r.to_bytes(nbytes, "little") for r in rows)
    raw = np.frombuffer(buf, dtype=np.uint8).reshape(len(rows), nbytes)
    out[:] = np.unpackbits(raw, axis=1, bitorder="little")[:, :width]
    return out
