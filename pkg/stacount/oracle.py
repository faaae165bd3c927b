# -*- coding: utf-8 -*-
"""Exact model counting and the bounded enumeration query.

Small formulas are counted exhaustively. The low variables are evaluated as
numpy vectors over all of their assignments at once, and the high variables
are walked in Gray-code order so that each step flips one variable and only
the constraints mentioning it are re-evaluated. Larger formulas fall back to
enumerating models with the solver and blocking each complete witness.
"""
import numpy as np

from .lib.exceptions import InsanityException, OracleRefusalException
from .lib.log_tools import make_default_logger
from .lib.utils import gray_code, trailing_zeros
from .solver import Solver

logger = make_default_logger()

EXHAUSTIVE_CAP = 26
ENUMERATION_CAP = 100000
LOW_BITS = 16


def _blocking_clause(witness):
    return [-lit for lit in witness.literals()]


def _exhaustive_models(f, collect):
    """Walk all assignments. Returns (count, model codes or None)."""
    n = f.num_vars
    low = min(n, LOW_BITS)
    high = n - low
    size = 1 << low
    codes = np.arange(size, dtype=np.int64)
    bits = [((codes >> i) & 1).astype(bool) for i in range(low)]

    clause_low = []
    clause_high = []
    for clause in f.clauses:
        if clause.is_tautology():
            continue
        sat = np.zeros(size, dtype=bool)
        high_lits = []
        for lit in clause.literals:
            v = abs(lit)
            if v <= low:
                sat |= bits[v - 1] if lit > 0 else ~bits[v - 1]
            else:
                high_lits.append(lit)
        clause_low.append(sat)
        clause_high.append(high_lits)

    xor_low = []
    xor_high = []
    xor_rhs = []
    for xor in f.xors:
        parity = np.zeros(size, dtype=bool)
        high_vars = []
        for v in xor.vars:
            if v <= low:
                parity ^= bits[v - 1]
            else:
                high_vars.append(v)
        xor_low.append(parity)
        xor_high.append(high_vars)
        xor_rhs.append(xor.rhs)

    # Which constraints mention each high variable.
    clause_index = [[] for _ in range(high)]
    for c, lits in enumerate(clause_high):
        for lit in lits:
            clause_index[abs(lit) - low - 1].append(c)
    xor_index = [[] for _ in range(high)]
    for x, high_vars in enumerate(xor_high):
        for v in high_vars:
            xor_index[v - low - 1].append(x)

    high_value = [False] * high
    clause_hit = [any(lit < 0 for lit in lits) for lits in clause_high]
    xor_parity = [False] * len(xor_high)

    total = 0
    models = [] if collect else None
    for k in range(1 << high):
        if k:
            b = trailing_zeros(k)
            high_value[b] = not high_value[b]
            for c in clause_index[b]:
                clause_hit[c] = any(
                    high_value[abs(lit) - low - 1] == (lit > 0)
                    for lit in clause_high[c])
            for x in xor_index[b]:
                xor_parity[x] = not xor_parity[x]
        mask = np.ones(size, dtype=bool)
        for c, hit in enumerate(clause_hit):
            if not hit:
                mask &= clause_low[c]
        for x, parity in enumerate(xor_low):
            if xor_rhs[x] != xor_parity[x]:
                mask &= parity
            else:
                mask &= ~parity
        found = int(np.count_nonzero(mask))
        total += found
        if collect and found:
            offset = gray_code(k) << low
            models.extend(int(i) + offset for i in np.nonzero(mask)[0])
    return total, models


def model_indices(f, cap=EXHAUSTIVE_CAP):
    """Sorted integer codes of every model; bit i-1 is variable i."""
    if f.num_vars > cap:
        raise OracleRefusalException(
            "Refusing to list models of a %s-variable formula (cap %s)" % (
                f.num_vars, cap))
    _, models = _exhaustive_models(f, collect=True)
    return sorted(models)


def enumerate_models(f, limit=None, budget=None, tally=None):
    """Yield distinct models of f, blocking each complete witness."""
    solver = Solver(f)
    found = 0
    while limit is None or found < limit:
        if tally is not None:
            tally.record()
        result = solver.solve(budget=budget)
        if not result.is_sat:
            return
        found += 1
        yield result.witness
        solver.add_clause(_blocking_clause(result.witness))


def bounded_count(f, p, budget=None, tally=None):
    """Return (min(p - 1, #f), number of solve calls made).

    Uses at most p solve calls. p below 2 asks for nothing and returns 0.
    """
    if p < 2:
        return 0, 0
    solver = Solver(f)
    s = 0
    calls = 0
    while s < p - 1:
        calls += 1
        if tally is not None:
            tally.record()
        result = solver.solve(budget=budget)
        if not result.is_sat:
            break
        s += 1
        solver.add_clause(_blocking_clause(result.witness))
    return s, calls


def counting_query(f, p, budget=None, tally=None):
    """The bounded enumeration query: min(p - 1, #f)."""
    return bounded_count(f, p, budget=budget, tally=tally)[0]


def count_exact(f, method='auto', cap=EXHAUSTIVE_CAP,
                enumeration_cap=ENUMERATION_CAP, budget=None):
    """Exact model count of f.

    :param method: 'exhaustive', 'enumerate' or 'auto' (exhaustive when the
    formula has at most ``cap`` variables)
    :raises OracleRefusalException: rather than return a partial count
    """
    if method not in ('auto', 'exhaustive', 'enumerate'):
        raise InsanityException("Unknown counting method %r" % method)
    if f.is_trivially_unsat():
        return 0
    if method == 'auto':
        method = 'exhaustive' if f.num_vars <= cap else 'enumerate'
    if method == 'exhaustive':
        if f.num_vars > cap:
            raise OracleRefusalException(
                "Refusing exhaustive count of a %s-variable formula (cap %s)"
                % (f.num_vars, cap))
        count, _ = _exhaustive_models(f, collect=False)
        logger.debug("Exhaustive count of %r: %s" % (f, count))
        return count
    s, calls = bounded_count(f, enumeration_cap + 2, budget=budget)
    if s > enumeration_cap:
        raise OracleRefusalException(
            "Refusing to count %r: more than %s models" % (f, enumeration_cap))
    logger.debug("Enumerated %s models of %r in %s solve calls" % (s, f,
                                                                  calls))
    return s
