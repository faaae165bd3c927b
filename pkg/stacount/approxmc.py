# -*- coding: utf-8 -*-
"""The enumeration-based baseline counter.

Each core run hashes the formula deeper until a bounded enumeration finds
at most ``pivot`` models in the cell, then scales that count back up by
2**depth. The answer is the median of the core runs that found a cell.
"""
import math

from .hashing import LazyChain
from .lib.exceptions import InsanityException
from .lib.log_tools import make_default_logger
from .lib.rng_utils import derive_path
from .lib.utils import lower_median
from .oracle import bounded_count

logger = make_default_logger()


def default_pivot(epsilon):
    """ceil(9.84 (1 + 1/eps)**2). A configuration choice, not a guarantee."""
    return int(math.ceil(9.84 * (1 + 1.0 / epsilon) ** 2))


def approxmc_core(f, pivot, chain, budget=None, tally=None):
    """One core run over ``chain``.

    :return: (2**i * s at the first depth i with s <= pivot, solve calls)
    """
    if pivot < 1:
        raise InsanityException("pivot must be at least 1, got %s" % pivot)
    calls = 0
    i = 0
    while True:
        s, made = bounded_count(chain.formula(i), pivot + 1, budget=budget,
                                tally=tally)
        calls += made
        if s <= pivot:
            logger.debug("approxmc_core: %s models in the cell at depth %s "
                         "after %s calls" % (s, i, calls))
            return (2 ** i) * s, calls
        i += 1
        if i > f.num_vars + 64:
            raise InsanityException("Hashing failed to shrink the cell below "
                                    "pivot %s after %s hashes" % (pivot, i))


def median_of_cores(values):
    """The lower median of the nonzero core results, or 0 if none."""
    found = [v for v in values if v != 0]
    if not found:
        return 0
    return lower_median(found)


def approxmc(f, T, pivot, seed, budget=None, tally=None):
    """Median of T core runs; core run r hashes with the chain at
    seed + (r,).

    :param tally: optional QueryTally that sees every solve call
    """
    if T < 1:
        raise InsanityException("T must be at least 1, got %s" % T)
    results = []
    total_calls = 0
    for r in range(T):
        chain = LazyChain(f, derive_path(seed, r))
        value, calls = approxmc_core(f, pivot, chain, budget=budget,
                                     tally=tally)
        results.append(value)
        total_calls += calls
    estimate = median_of_cores(results)
    logger.info("approxmc: estimate %s from %s core runs, %s solve calls" % (
        estimate, T, total_calls))
    return estimate
