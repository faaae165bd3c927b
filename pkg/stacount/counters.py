# -*- coding: utf-8 -*-
"""Approximate counting with satisfiability queries only.

Each run draws a fresh hashed chain and finds its depth: the smallest i with
F_i unsatisfiable. Across runs, the fraction of depths <= d estimates
q_d = (1 - 2**-d) ** #F, which is inverted at the depth whose proportion is
closest to one half. stac() runs a fixed number of times; stac_dsc() stops as
soon as a proportion interval certifies the requested accuracy.

Run r of a call seeded with path P uses the chain at P + (r,), so results
depend only on the seed, never on probe order or scheduling.
"""
from collections import namedtuple

from .hashing import LazyChain
from .lib.exceptions import InsanityException
from .lib.log_tools import make_default_logger
from .lib.rng_utils import derive_path
from .solver import solve
from .stats import (WILSON, AccuracyParams, compute_T, count_interval,
                    estimate_count, proportion_interval)

logger = make_default_logger()

DEFAULT_OFFSET = 5
TINY_PROPORTION = 1e-12


class DepthHistogram(object):
    """c[i] counts the runs whose depth exceeded i."""

    def __init__(self, c=None, runs=0):
        self.c = list(c or [])
        self.runs = runs
        self._check()

    def _check(self):
        for i, value in enumerate(self.c):
            if value > self.runs or value < 0:
                raise InsanityException("C[%s]=%s with %s runs" % (
                    i, value, self.runs))
            if i and value > self.c[i - 1]:
                raise InsanityException("Histogram must be non-increasing, "
                                        "got %s" % self.c)

    def add(self, depth):
        if len(self.c) < depth:
            self.c.extend([0] * (depth - len(self.c)))
        for i in range(depth):
            self.c[i] += 1
        self.runs += 1

    def merge(self, other):
        """Combine two histograms. Order does not matter."""
        size = max(len(self.c), len(other.c))
        merged = [self[i] + other[i] for i in range(size)]
        return DepthHistogram(merged, self.runs + other.runs)

    def __getitem__(self, i):
        return self.c[i] if i < len(self.c) else 0

    def __eq__(self, other):
        return (isinstance(other, DepthHistogram) and
                self.runs == other.runs and
                [self[i] for i in range(max(len(self.c), len(other.c)))] ==
                [other[i] for i in range(max(len(self.c), len(other.c)))])

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return '<DepthHistogram runs=%s c=%s>' % (self.runs, self.c)

    def select_depth(self):
        """The d with C[d] closest to runs / 2, ties to the smaller d."""
        half = self.runs / 2.0
        best = 0
        for d in range(1, len(self.c) + 1):
            if abs(self[d] - half) < abs(self[best] - half):
                best = d
        return best


class LeapFrogState(object):
    """Running mean of returned depths, used to start the next probe near
    where the last ones ended."""

    def __init__(self, offset=DEFAULT_OFFSET):
        if offset < 1:
            raise InsanityException("Leap-frog offset must be positive, got "
                                    "%s" % offset)
        self.offset = offset
        self.mean_depth = 0.0
        self.invocations = 0

    def update(self, depth):
        self.invocations += 1
        self.mean_depth += (depth - self.mean_depth) / self.invocations

    def start(self):
        if not self.invocations:
            return 0
        return max(0, int(round(self.mean_depth)) - self.offset)

    def __repr__(self):
        return '<LeapFrogState mean=%.2f invocations=%s offset=%s>' % (
            self.mean_depth, self.invocations, self.offset)


class CountEstimate(namedtuple('CountEstimate', [
        'estimate', 'chosen_d', 'runs_used', 'sat_queries', 'interval',
        'stopped_early'])):
    __slots__ = ()

    def to_dict(self):
        interval = None
        if self.interval is not None:
            interval = {'lower': self.interval.lower,
                        'upper': self.interval.upper,
                        'method': self.interval.method}
        return {
            'estimate': self.estimate,
            'chosen_d': self.chosen_d,
            'runs_used': self.runs_used,
            'sat_queries': self.sat_queries,
            'interval': interval,
            'stopped_early': self.stopped_early,
        }


def get_depth(f, chain, leap=None, budget=None):
    """Find the smallest i with F_i of ``chain`` unsatisfiable.

    With a warm leap-frog state, probing starts offset below the mean depth
    and jumps down by offset while the probe is unsat, then scans up.
    Unsatisfiability is monotone along a chain, so every schedule returns the
    same depth for the same chain.

    :param chain: a LazyChain over f
    :return: (depth, number of solve calls)
    """
    if chain.base is not f and chain.base != f:
        raise InsanityException("Chain was built over a different formula")
    queries = [0]

    def is_sat(i):
        queries[0] += 1
        return solve(chain.formula(i), budget=budget).is_sat

    i = leap.start() if leap is not None else 0
    if i:
        while not is_sat(i):
            if i == 0:
                break
            i = max(0, i - leap.offset)
        else:
            i += 1
            while is_sat(i):
                i += 1
    else:
        while is_sat(i):
            i += 1
    depth = i
    logger.debug("Depth %s after %s queries (%r)" % (depth, queries[0], leap))
    if leap is not None:
        leap.update(depth)
    return depth, queries[0]


def estimate_from_histogram(hist):
    """The fixed-T selection: (d, estimate). d = 0 gives estimate 0."""
    d = hist.select_depth()
    if d == 0:
        return 0, 0.0
    counter = hist.runs - hist[d]
    return d, estimate_count(d, float(counter) / hist.runs)


def _run_depths(f, T, seed, leapfrog, offset, budget, hist):
    leap = LeapFrogState(offset) if leapfrog else None
    queries = 0
    for r in range(T):
        chain = LazyChain(f, derive_path(seed, r))
        depth, calls = get_depth(f, chain, leap=leap, budget=budget)
        hist.add(depth)
        queries += calls
        yield r + 1, queries


def _histogram_estimate(hist, queries, params, interval_method,
                        stopped_early):
    d, estimate = estimate_from_histogram(hist)
    if d == 0 and hist[0] > 0:
        logger.warning("No depth had a usable proportion after %s runs; "
                       "returning 0 for a satisfiable input" % hist.runs)
    interval = None
    if d and params is not None:
        q = float(hist.runs - hist[d]) / hist.runs
        interval = count_interval(
            d, proportion_interval(q, hist.runs, params.z, interval_method))
    return CountEstimate(estimate, d, hist.runs, queries, interval,
                         stopped_early)


def stac(f, T, seed, params=None, interval_method=WILSON, leapfrog=True,
         offset=DEFAULT_OFFSET, budget=None):
    """Estimate #f from T depth runs.

    :param params: optional AccuracyParams; when given, a count-scale
    interval at the chosen depth is attached
    :return: a CountEstimate
    """
    if T < 1:
        raise InsanityException("T must be at least 1, got %s" % T)
    hist = DepthHistogram()
    queries = 0
    for _, queries in _run_depths(f, T, seed, leapfrog, offset, budget, hist):
        pass
    result = _histogram_estimate(hist, queries, params, interval_method,
                                 False)
    logger.info("stac: estimate %.3f at d=%s from %s runs, %s queries" % (
        result.estimate, result.chosen_d, T, queries))
    return result


def stopping_check(c_d, t, d, params, interval_method=WILSON):
    """One dynamic stopping test at depth d after t runs.

    :return: (stop, M, L, U); M, L and U are None when the depth is skipped
    """
    if not 0 < c_d < t:
        return False, None, None, None
    q = float(t - c_d) / t
    interval = proportion_interval(q, t, params.z, interval_method)
    low = interval.lower
    if low <= 0:
        return False, None, None, None
    low = max(low, TINY_PROPORTION)
    M = estimate_count(d, q)
    U = estimate_count(d, low)
    L = estimate_count(d, interval.upper) if interval.upper < 1 else 0.0
    eps = params.epsilon
    stop = U < (1 + eps) * M and L > M / (1 + eps)
    return stop, M, L, U


def stac_dsc(f, T, params, seed, interval_method=WILSON, leapfrog=True,
             offset=DEFAULT_OFFSET, batch=1, budget=None):
    """stac with a dynamic stopping criterion.

    After every ``batch`` runs each depth d with 0 < C[d] < t is tested in
    ascending order; the first that certifies the (eps, delta) bound is
    returned. Otherwise the fixed-T selection is used after T runs.
    """
    if not isinstance(params, AccuracyParams):
        params = AccuracyParams(*params)
    if T is None:
        T = compute_T(params)
    if T < 1:
        raise InsanityException("T must be at least 1, got %s" % T)
    if batch < 1:
        raise InsanityException("Batch size must be at least 1, got %s" %
                                batch)
    hist = DepthHistogram()
    queries = 0
    for t, queries in _run_depths(f, T, seed, leapfrog, offset, budget, hist):
        if t % batch and t != T:
            continue
        for d in range(1, len(hist.c)):
            stop, M, L, U = stopping_check(hist[d], t, d, params,
                                           interval_method)
            if stop:
                q = float(t - hist[d]) / t
                interval = count_interval(
                    d, proportion_interval(q, t, params.z, interval_method))
                logger.info("stac_dsc: stopped after %s of %s runs at d=%s, "
                            "estimate %.3f in [%.3f, %.3f]" % (
                                t, T, d, M, L, U))
                return CountEstimate(M, d, t, queries, interval, True)
    result = _histogram_estimate(hist, queries, params, interval_method,
                                 False)
    logger.info("stac_dsc: no early stop in %s runs, estimate %.3f at d=%s" %
                (T, result.estimate, result.chosen_d))
    return result
