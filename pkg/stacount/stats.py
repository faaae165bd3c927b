# -*- coding: utf-8 -*-
"""Closed-form statistics behind the counters.

The depth at which a hashed chain turns unsatisfiable is modeled by
q_d = (1 - 2**-d) ** #F, the probability that F_d is unsat. Counters estimate
q_d from a binomial sample and invert it; this module holds that inversion,
the proportion intervals, and the table of run counts T that make the
inversion accurate within (1 + eps) with probability 1 - delta.

Quantiles are two-sided everywhere: z = normal_quantile(1 - delta / 2).
That is the convention that reproduces T = 22 at (0.8, 0.2).
"""
import math
from collections import namedtuple

from .lib.exceptions import InsanityException, UnusableDepthException

QD_LOW = 0.4
QD_HIGH = 0.65
NORMAL = 'normal'
WILSON = 'wilson'
INTERVAL_METHODS = (NORMAL, WILSON)

DEFAULT_EPSILONS = (0.1, 0.2, 0.4, 0.6, 0.8, 1.0)
DEFAULT_DELTAS = (0.05, 0.1, 0.2)


class AccuracyParams(namedtuple('AccuracyParams', ['epsilon', 'delta'])):
    __slots__ = ()

    def __new__(cls, epsilon, delta):
        epsilon = float(epsilon)
        delta = float(delta)
        if not epsilon > 0:
            raise InsanityException("epsilon must be > 0, got %s" % epsilon)
        if not 0 < delta < 1:
            raise InsanityException("delta must be in (0, 1), got %s" % delta)
        return super(AccuracyParams, cls).__new__(cls, epsilon, delta)

    @property
    def z(self):
        return normal_quantile(1 - self.delta / 2)


class ConfidenceInterval(namedtuple('ConfidenceInterval',
                                    ['lower', 'upper', 'method'])):
    __slots__ = ()

    def contains(self, x):
        return self.lower <= x <= self.upper


def q_of(d, count):
    """(1 - 2**-d) ** count, computed in log space."""
    if count < 0:
        raise InsanityException("Counts are non-negative, got %s" % count)
    if count == 0:
        return 1.0
    if d == 0:
        return 0.0
    return math.exp(float(count) * math.log1p(-2.0 ** -d))


def estimate_count(d, proportion):
    """Invert q_d: the count whose q_d equals ``proportion``."""
    if d < 1:
        raise UnusableDepthException("Depth %s cannot be inverted" % d)
    if not 0 < proportion < 1:
        raise UnusableDepthException(
            "Proportion %s at depth %s is outside (0, 1)" % (proportion, d))
    return math.log(proportion) / math.log1p(-2.0 ** -d)


# Coefficients of Acklam's rational approximation to the inverse normal CDF.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def _rational_quantile(p):
    if p < _P_LOW:
        q = math.sqrt(-2 * math.log(p))
        return ((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q +
                  _C[4]) * q + _C[5]) /
                ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1))
    if p > 1 - _P_LOW:
        return -_rational_quantile(1 - p)
    q = p - 0.5
    r = q * q
    return ((((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) *
             r + _A[5]) * q /
            (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) *
             r + 1))


def normal_cdf(x):
    return 0.5 * math.erfc(-x / math.sqrt(2))


def normal_quantile(p):
    """Inverse standard normal CDF, good to about 1e-15 in the body.

    The rational approximation is refined with Halley steps on the CDF.
    """
    if not 0 < p < 1:
        raise InsanityException("Quantile level must be in (0, 1), got %s" %
                                p)
    if p == 0.5:
        return 0.0
    x = _rational_quantile(p)
    for _ in range(3):
        e = normal_cdf(x) - p
        u = e * math.sqrt(2 * math.pi) * math.exp(x * x / 2)
        step = u / (1 + x * u / 2)
        x -= step
        if abs(step) < 1e-15:
            break
    return x


def _clamped(lower, upper, method):
    return ConfidenceInterval(max(0.0, lower), min(1.0, upper), method)


def interval_normal(q, t, z):
    """q +/- z * sqrt(q (1 - q) / t), clamped to [0, 1]."""
    half = z * math.sqrt(q * (1 - q) / t)
    return _clamped(q - half, q + half, NORMAL)


def interval_wilson(q, t, z):
    """The Wilson score interval for an observed proportion q of t trials."""
    z2 = z * z
    scale = 1.0 / (1 + z2 / t)
    center = q + z2 / (2.0 * t)
    half = z * math.sqrt(q * (1 - q) / t + z2 / (4.0 * t * t))
    return _clamped(scale * (center - half), scale * (center + half), WILSON)


def proportion_interval(q, t, z, method=WILSON):
    if method == WILSON:
        return interval_wilson(q, t, z)
    if method == NORMAL:
        return interval_normal(q, t, z)
    raise InsanityException("Unknown interval method %r, expected one of %s"
                            % (method, INTERVAL_METHODS))


def count_interval(d, interval):
    """Map a proportion interval at depth d to the count scale.

    The log base 1 - 2**-d is below one, so the upper proportion gives the
    lower count. Returns None when an end is 0, which has no count.
    """
    if interval.lower <= 0:
        return None
    lower = estimate_count(d, interval.upper) if interval.upper < 1 else 0.0
    upper = estimate_count(d, interval.lower) if interval.lower < 1 else 0.0
    return ConfidenceInterval(lower, upper, interval.method)


def t_term_lower(q, epsilon, z):
    """z / (2 q (1 - q**eps)): the run count needed for the upper bound."""
    return z / (2 * q * (1 - q ** epsilon))


def t_term_upper(q, epsilon, z):
    """z / (2 (q**(1/(1+eps)) - q)): the run count needed for the lower
    bound."""
    return z / (2 * (q ** (1 / (1 + epsilon)) - q))


def t_term_lower_turning_point(epsilon):
    return (1 + epsilon) ** (-1 / epsilon)


def t_term_upper_turning_point(epsilon):
    return (1 + epsilon) ** (-(1 + epsilon) / epsilon)


def compute_T(params):
    """The number of runs that guarantees the (eps, delta) bound whenever
    the chosen depth has q_d in [QD_LOW, QD_HIGH]. Both terms are monotone on
    either side of a single turning point, so the window ends suffice.
    """
    z = params.z
    best = 0
    for q in (QD_LOW, QD_HIGH):
        best = max(best,
                   int(math.ceil(t_term_lower(q, params.epsilon, z) ** 2)),
                   int(math.ceil(t_term_upper(q, params.epsilon, z) ** 2)))
    return best


def t_table(epsilons=DEFAULT_EPSILONS, deltas=DEFAULT_DELTAS):
    """Rows of (epsilon, delta, T) over the grid."""
    return [(e, d, compute_T(AccuracyParams(e, d)))
            for e in epsilons for d in deltas]


def _scan_limit(count):
    return max(64, int(count).bit_length() + 16)


def qd_window_exists(count):
    """Find d with q_d in [QD_LOW, QD_HIGH]. Guaranteed for count > 5.

    :return: (d, q), or None when no depth lands in the window
    """
    for d in range(1, _scan_limit(count)):
        q = q_of(d, count)
        if QD_LOW <= q <= QD_HIGH:
            return d, q
        if q > QD_HIGH:
            break
    return None


def depth_window(count):
    """The smallest d with q_d < 0.05 and q_{d+7} > 0.95, or None."""
    if count < 1:
        raise InsanityException("depth_window needs count >= 1, got %s" %
                                count)
    for d in range(0, _scan_limit(count)):
        if q_of(d, count) >= 0.05:
            break
        if q_of(d + 7, count) > 0.95:
            return d
    return None
