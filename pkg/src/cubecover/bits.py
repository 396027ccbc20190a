"""Vertex sets as Python ints (bit ``i`` set iff vertex ``i`` is a member)."""
import numpy as np


def iter_bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def members(mask):
    return list(iter_bits(mask))


def from_ids(ids):
    mask = 0
    for i in ids:
        mask |= 1 << i
    return mask


def from_bool(arr):
    """Pack a boolean vector into a bitset."""
    packed = np.packbits(np.asarray(arr, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def has(mask, i):
    return (mask >> i) & 1 == 1


def single(mask):
    """The only member of a singleton set; ``None`` otherwise."""
    if mask and not mask & (mask - 1):
        return mask.bit_length() - 1
    return None
