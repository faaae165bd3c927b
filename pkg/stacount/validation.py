# -*- coding: utf-8 -*-
"""Empirical checks of the unsat-probability model.

Three probabilities are compared here for a formula with ``count`` models
over n variables, hashed d times:

  * the single-subset law: a uniform sample of 2**(n-d) assignments avoids
    every model (exact, hypergeometric);
  * the idealized family: the intersection of d independent uniform
    half-size subsets avoids every model (exact, by inclusion-exclusion, and
    sampled);
  * the limit (1 - 2**-d) ** count, which both approach as n grows.

The first two agree at d = 1 and differ for d > 1, because the intersection
of independent halves has a random size. The XOR family is compared with the
limit directly through chain_unsat_frequency().
"""
import csv
import math
from collections import namedtuple
from fractions import Fraction

import numpy as np

from .hashing import LazyChain
from .lib.exceptions import InsanityException
from .lib.log_tools import make_default_logger
from .lib.rng_utils import derive_path, make_stream
from .oracle import model_indices

logger = make_default_logger()

MAX_EXACT_VARS = 30
MAX_SAMPLED_VARS = 14

LIMIT_CSV_COLUMNS = ['n', 'count', 'd', 'single_subset', 'independent',
                     'limit', 'gap', 'sampled']


class LimitRow(namedtuple('LimitRow', ['n', 'count', 'd', 'single_subset',
                                       'independent', 'limit', 'gap',
                                       'sampled'])):
    __slots__ = ()

    def as_csv_row(self):
        return [self.n, self.count, self.d, float(self.single_subset),
                float(self.independent), float(self.limit), float(self.gap),
                '' if self.sampled is None else self.sampled]


def _check_sizes(n, count, d, max_vars=MAX_EXACT_VARS):
    if n > max_vars:
        raise InsanityException("n=%s is above the limit of %s" % (n,
                                                                   max_vars))
    if not 1 <= d <= n:
        raise InsanityException("Need 1 <= d <= n, got d=%s n=%s" % (d, n))
    if not 0 <= count <= 2 ** n:
        raise InsanityException("count=%s is not in [0, 2**%s]" % (count, n))


def hypergeometric_unsat_prob(n, count, d):
    """C(2**n - count, 2**(n-d)) / C(2**n, 2**(n-d)) as an exact Fraction.

    Evaluated as a product over whichever of count and 2**(n-d) is smaller,
    never through factorials.
    """
    _check_sizes(n, count, d)
    total = 2 ** n
    sample = 2 ** (n - d)
    if sample > total - count:
        return Fraction(0)
    result = Fraction(1)
    if count <= sample:
        for j in range(count):
            result *= Fraction(total - sample - j, total - j)
    else:
        for i in range(sample):
            result *= Fraction(total - count - i, total - i)
    return result


def hypergeometric_by_binomials(n, count, d):
    """The same probability straight from the binomial coefficients."""
    _check_sizes(n, count, d)
    total = 2 ** n
    sample = 2 ** (n - d)
    return Fraction(math.comb(total - count, sample), math.comb(total, sample))


def g_family_unsat_prob(n, count, d):
    """Exact probability that d independent half-size subsets have an
    intersection avoiding ``count`` fixed points."""
    _check_sizes(n, count, d)
    total = 2 ** n
    half = total // 2
    result = Fraction(0)
    contains = Fraction(1)
    for a in range(count + 1):
        if a:
            if a > half:
                break
            contains *= Fraction(half - (a - 1), total - (a - 1))
        term = math.comb(count, a) * contains ** d
        result += -term if a % 2 else term
    return result


def limit_unsat_prob(count, d):
    return Fraction(2 ** d - 1, 2 ** d) ** count


def draw_g_set(n, stream):
    """A uniform subset of half of the 2**n assignments, as a bool mask."""
    total = 1 << n
    mask = np.zeros(total, dtype=bool)
    mask[stream.choice(total, size=total // 2, replace=False)] = True
    return mask


def sample_g_family_models(n, models, d, trials, seed):
    """Fraction of trials in which d independent draws intersect to a set
    avoiding every model. Trial i draws from the stream at seed + (i,)."""
    if n > MAX_SAMPLED_VARS:
        raise InsanityException("Sampling materializes 2**n points; n=%s is "
                                "above %s" % (n, MAX_SAMPLED_VARS))
    if trials < 1:
        raise InsanityException("Need at least one trial")
    models = np.asarray(sorted(models), dtype=np.int64)
    if not len(models):
        return 1.0
    avoided = 0
    for trial in range(trials):
        stream = make_stream(seed, trial)
        solutions = draw_g_set(n, stream)
        for _ in range(d - 1):
            solutions &= draw_g_set(n, stream)
        if not solutions[models].any():
            avoided += 1
    return float(avoided) / trials


def sample_g_family_unsat(f, d, trials, seed):
    """Sampled unsat probability of f conjoined with d idealized hashes."""
    if f.num_vars > MAX_SAMPLED_VARS:
        raise InsanityException("Sampling materializes 2**n points; n=%s is "
                                "above %s" % (f.num_vars, MAX_SAMPLED_VARS))
    return sample_g_family_models(f.num_vars, model_indices(f), d, trials,
                                  seed)


def compare_limit(n_grid, count, d, trials=None, seed=0):
    """Rows comparing the exact probabilities with the limit, one per n.

    With ``trials``, rows with n small enough also carry a sampled value of
    the idealized family over an arbitrary set of ``count`` points.
    """
    limit = limit_unsat_prob(count, d)
    rows = []
    for n in sorted(n_grid):
        single = hypergeometric_unsat_prob(n, count, d)
        sampled = None
        if trials and n <= MAX_SAMPLED_VARS:
            sampled = sample_g_family_models(n, range(count), d, trials,
                                             derive_path(seed, n))
        rows.append(LimitRow(n, count, d, single,
                             g_family_unsat_prob(n, count, d), limit,
                             abs(single - limit), sampled))
        logger.debug("compare_limit n=%s: %s" % (n, rows[-1]))
    return rows


def write_limit_csv(rows, out):
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(LIMIT_CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.as_csv_row())


def _model_bits(models, n):
    codes = np.asarray(models, dtype=np.int64)
    return np.array([(codes >> i) & 1 for i in range(n)],
                    dtype=np.int64).T


def chain_unsat_frequency(f, d, chains, seed, models=None):
    """Fraction of ``chains`` XOR chains whose F_d is unsat.

    Chain c is the LazyChain at seed + (c,), the same chain a counter with
    that seed would draw, and F_d is judged against f's model set.
    """
    if models is None:
        models = model_indices(f)
    if not len(models):
        return 1.0
    bits = _model_bits(models, f.num_vars)
    unsat = 0
    for c in range(chains):
        chain = LazyChain(f, derive_path(seed, c))
        alive = np.ones(len(models), dtype=bool)
        for k in range(1, d + 1):
            h = chain.hash(k)
            values = (bits.dot(np.asarray(h.coeffs, dtype=np.int64)) & 1)
            alive &= (values.astype(bool) ^ h.a0)
            if not alive.any():
                break
        if not alive.any():
            unsat += 1
    return float(unsat) / chains
