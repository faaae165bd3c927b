"""Deterministic random streams.

Every stream in the package is a counter-based Philox generator keyed by a
path of non-negative integers. Two different paths never share a stream, so
parallel workers can be handed their paths up front and will produce the same
numbers no matter how the work is scheduled.
"""
import numbers

import numpy as np

from .exceptions import InsanityException

# Seeds are 64-bit; signed values wrap into this range.
SEED_MODULUS = 2 ** 64


def seed_path(seed):
    """Normalize a seed given as an int or a sequence of ints into a tuple.

    >>> seed_path(7)
    (7,)
    >>> seed_path((7, 0, 3))
    (7, 0, 3)
    >>> seed_path(-1)
    (18446744073709551615,)
    """
    if isinstance(seed, numbers.Integral):
        path = (int(seed),)
    else:
        path = tuple(int(s) for s in seed)
    if not path:
        raise InsanityException("A seed path needs at least one element.")
    return tuple(p % SEED_MODULUS if p < 0 else p for p in path)


def derive_path(seed, *parts):
    """Extend a seed path by more indices, e.g. (master, instance, rep)."""
    return seed_path(seed) + tuple(int(p) for p in parts)


def make_stream(seed, *parts):
    """Build a generator for the stream at ``seed_path(seed) + parts``.

    The first element of the path is the entropy; the rest is the spawn key,
    which is how numpy names independent children of one seed.
    """
    path = derive_path(seed, *parts)
    sequence = np.random.SeedSequence(path[0], spawn_key=path[1:])
    return np.random.Generator(np.random.Philox(sequence))
