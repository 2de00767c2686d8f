"""Python ints as fixed-width bitsets, with numpy bridges for bulk work."""
from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np


def from_indices(indices: Iterable[int], nbits: int) -> int:
    idx = indices if isinstance(indices, np.ndarray) else np.fromiter(indices, dtype=np.int64)
    if idx.size == 0:
        return 0
    if idx.size < 64:
        out = 0
        for i in idx.tolist():
            out |= 1 << i
        return out
    arr = np.zeros(nbits, dtype=bool)
    arr[idx] = True
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def to_bool_array(x: int, nbits: int) -> np.ndarray:
    raw = np.frombuffer(x.to_bytes((nbits + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little", count=nbits).astype(bool)


def from_bool_array(arr: np.ndarray) -> int:
    return int.from_bytes(np.packbits(np.asarray(arr, dtype=bool), bitorder="little").tobytes(), "little")


def iter_indices(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def to_bool_matrix(xs: list[int], nbits: int) -> np.ndarray:
    """Stack bitsets as rows of a (len(xs), nbits) boolean matrix."""
    nbytes = (nbits + 7) // 8
    if not xs:
        return np.zeros((0, nbits), dtype=bool)
    raw = np.frombuffer(b"".join(x.to_bytes(nbytes, "little") for x in xs), dtype=np.uint8)
    return np.unpackbits(raw.reshape(len(xs), nbytes), axis=1, bitorder="little", count=nbits).astype(bool)
