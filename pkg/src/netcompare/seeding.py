"""Seed derivation.

Every random draw in an experiment descends from a single master seed.
Child seeds are obtained by hashing ``(master, *keys)`` through
:class:`numpy.random.SeedSequence`, so a task's seed depends only on its
index path and never on execution order.
"""

import zlib

import numpy as np


def _key(k):
    if isinstance(k, str):
        return zlib.crc32(k.encode("utf-8"))
    if isinstance(k, float):
        return zlib.crc32(repr(k).encode("ascii"))
    return int(k)


def derive_seed(master, *keys):
    """Return a 63-bit child seed for ``master`` and an index path.

    Keys may be non-negative ints, floats or strings.

    >>> derive_seed(7, 0, 1) == derive_seed(7, 0, 1)
    True
    >>> derive_seed(7, 0, 1) != derive_seed(7, 1, 0)
    True
    """
    entropy = [int(master) & 0xFFFFFFFFFFFFFFFF] + [_key(k) for k in keys]
    state = np.random.SeedSequence(entropy).generate_state(2, dtype=np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1])) & 0x7FFFFFFFFFFFFFFF


def rng(master, *keys):
    return np.random.default_rng(derive_seed(master, *keys))
