# -*- coding: utf-8 -*-
"""A small DPLL solver for CNF plus XOR constraints.

Clauses are propagated with two watched literals. XOR constraints are never
expanded to clauses: whenever clause propagation reaches a fixpoint, the XOR
rows are reduced by the current assignment and put into reduced row echelon
form over GF(2). An empty row with odd parity is a conflict and a row with a
single variable forces that variable. Search is chronological backtracking
without clause learning.
"""
from collections import namedtuple

from .formula import Assignment, Clause
from .lib.exceptions import BudgetExceededException, InsanityException
from .lib.log_tools import make_default_logger
from .lib.rng_utils import make_stream

logger = make_default_logger()

SAT = 'SAT'
UNSAT = 'UNSAT'


class SolveResult(namedtuple('SolveResult', ['status', 'witness', 'decisions',
                                             'propagations'])):
    __slots__ = ()

    @property
    def is_sat(self):
        return self.status == SAT


class QueryTally(object):
    """Counts satisfiability queries across helpers that share it."""

    def __init__(self):
        self.calls = 0

    def record(self, calls=1):
        self.calls += calls

    def __repr__(self):
        return '<QueryTally calls=%s>' % self.calls


def _parity(x):
    return bin(x).count('1') & 1


def evaluate(f, a):
    """True iff every clause has a true literal and every XOR has the right
    parity under the total assignment ``a``."""
    if not isinstance(a, Assignment):
        a = Assignment.from_literals(
            [v if a[v] else -v for v in sorted(a)], f.num_vars)
    if a.num_vars != f.num_vars:
        raise InsanityException("Assignment covers %s variables, formula has "
                                "%s" % (a.num_vars, f.num_vars))
    values = a.values
    for clause in f.clauses:
        if not any(values[abs(lit) - 1] == (lit > 0)
                   for lit in clause.literals):
            return False
    for xor in f.xors:
        parity = False
        for v in xor.vars:
            parity ^= values[v - 1]
        if parity != xor.rhs:
            return False
    return True


class Solver(object):
    """A reusable decision procedure for one formula.

    Clauses can be added between calls to solve(), which is how blocking
    clauses are asserted during model enumeration. An instance must not be
    shared between threads while solving.
    """

    def __init__(self, formula, seed=None):
        self.formula = formula
        self.num_vars = n = formula.num_vars
        self.decisions = 0
        self.propagations = 0

        self._value = [None] * (n + 1)
        self._trail = []
        self._trail_lim = []
        self._qhead = 0
        self._assigned_mask = 0
        self._true_mask = 0

        self._watches = [[] for _ in range(2 * n + 1)]
        self._units = []
        self._occurrences = [0] * (n + 1)
        self._contradiction = False
        self._xor_rows = []
        self._xor_vars = 0
        self._xor_cache = None

        for clause in formula.clauses:
            self._attach(list(clause.literals))
        for xor in formula.xors:
            if xor.is_contradiction():
                self._contradiction = True
                continue
            self._xor_rows.append((xor.mask, xor.rhs))
            self._xor_vars |= xor.mask
            for v in xor.vars:
                self._occurrences[v] += 1

        # Branch on the most constrained variable, ties by lowest index.
        self._order = sorted(range(1, n + 1),
                             key=lambda v: (-self._occurrences[v], v))
        if seed is None:
            self._phase = [False] * (n + 1)
        else:
            bits = make_stream(seed).integers(0, 2, size=n + 1)
            self._phase = [bool(b) for b in bits]

    def _attach(self, literals):
        clause = Clause(literals)
        if clause.is_tautology():
            return
        for v in clause.variables:
            self._occurrences[v] += 1
        if len(literals) == 1:
            self._units.append(literals[0])
            return
        self._watches[literals[0] + self.num_vars].append(literals)
        self._watches[literals[1] + self.num_vars].append(literals)

    def add_clause(self, literals):
        """Add a clause for every later call to solve()."""
        for lit in literals:
            if lit == 0 or abs(lit) > self.num_vars:
                raise InsanityException("Literal %s out of range [1, %s]" % (
                    lit, self.num_vars))
        self._reset()
        unique = []
        for lit in literals:
            if lit not in unique:
                unique.append(lit)
        if not unique:
            self._contradiction = True
            return
        self._attach(unique)

    def _reset(self):
        while self._trail_lim:
            self._undo_level()
        self._undo_to(0)

    def _undo_to(self, size):
        value = self._value
        for v in self._trail[size:]:
            value[v] = None
            bit = 1 << v
            self._assigned_mask &= ~bit
            self._true_mask &= ~bit
        del self._trail[size:]
        self._qhead = min(self._qhead, size)

    def _undo_level(self):
        self._undo_to(self._trail_lim.pop())

    def _assign(self, lit):
        v = lit if lit > 0 else -lit
        self._value[v] = lit > 0
        self._trail.append(v)
        bit = 1 << v
        self._assigned_mask |= bit
        if lit > 0:
            self._true_mask |= bit

    def _check_budget(self, budget):
        if budget is not None and self.decisions + self.propagations > budget:
            raise BudgetExceededException(
                "Solver step budget of %s exhausted after %s decisions and %s "
                "propagations" % (budget, self.decisions, self.propagations),
                steps=self.decisions + self.propagations)

    def _enqueue(self, lit):
        """Assign lit at level 0, returning False if it is already false."""
        v = abs(lit)
        current = self._value[v]
        if current is None:
            self._assign(lit)
            return True
        return current == (lit > 0)

    def _propagate_clauses(self, budget):
        value = self._value
        n = self.num_vars
        trail = self._trail
        watches = self._watches
        while self._qhead < len(trail):
            v = trail[self._qhead]
            self._qhead += 1
            false_lit = -v if value[v] else v
            ws = watches[false_lit + n]
            i = j = 0
            while i < len(ws):
                clause = ws[i]
                i += 1
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                first = clause[0]
                first_value = value[first if first > 0 else -first]
                if first_value is not None and first_value == (first > 0):
                    ws[j] = clause
                    j += 1
                    continue
                moved = False
                for k in range(2, len(clause)):
                    lit = clause[k]
                    lit_value = value[lit if lit > 0 else -lit]
                    if lit_value is None or lit_value == (lit > 0):
                        clause[1], clause[k] = lit, clause[1]
                        watches[lit + n].append(clause)
                        moved = True
                        break
                if moved:
                    continue
                ws[j] = clause
                j += 1
                if first_value is not None:
                    while i < len(ws):
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    return False
                self._assign(first)
                self.propagations += 1
                self._check_budget(budget)
            del ws[j:]
        return True

    def _propagate_xors(self, budget):
        """Run GF(2) elimination on the XOR rows under the current partial
        assignment. Returns None on conflict, else the number of variables
        it forced."""
        if not self._xor_rows:
            return 0
        assigned = self._assigned_mask & self._xor_vars
        stamp = (assigned, self._true_mask & self._xor_vars)
        # Only verdicts that leave the assignment untouched are cached: a
        # conflict or a fixpoint. Forcing changes the stamp anyway.
        if self._xor_cache is not None and self._xor_cache[0] == stamp:
            return self._xor_cache[1]

        true_mask = self._true_mask
        basis = []
        for mask, rhs in self._xor_rows:
            row = mask & ~assigned
            parity = rhs ^ bool(_parity(mask & true_mask))
            for pivot, pivot_row, pivot_parity in basis:
                if (row >> pivot) & 1:
                    row ^= pivot_row
                    parity ^= pivot_parity
            if not row:
                if parity:
                    self._xor_cache = (stamp, None)
                    return None
                continue
            pivot = (row & -row).bit_length() - 1
            for idx, (other, other_row, other_parity) in enumerate(basis):
                if (other_row >> pivot) & 1:
                    basis[idx] = (other, other_row ^ row, other_parity ^ parity)
            basis.append((pivot, row, parity))

        forced = 0
        for pivot, row, parity in basis:
            if row & (row - 1) == 0:
                self._assign(pivot if parity else -pivot)
                self.propagations += 1
                forced += 1
        if forced:
            self._check_budget(budget)
        else:
            self._xor_cache = (stamp, 0)
        return forced

    def _propagate(self, budget):
        while True:
            if not self._propagate_clauses(budget):
                return False
            forced = self._propagate_xors(budget)
            if forced is None:
                return False
            if not forced:
                return True

    def _pick_branch_variable(self):
        value = self._value
        for v in self._order:
            if value[v] is None:
                return v
        return None

    def _result(self, status):
        witness = None
        if status == SAT:
            witness = Assignment(self._value[1:])
        return SolveResult(status, witness, self.decisions, self.propagations)

    def solve(self, assumptions=(), budget=None):
        """Decide the formula under the given assumption literals.

        :param assumptions: literals fixed at level 0 before search
        :param budget: optional limit on decisions plus propagations
        :return: a SolveResult
        :raises BudgetExceededException: if the budget runs out first
        """
        self._reset()
        self._xor_cache = None
        self.decisions = 0
        self.propagations = 0
        for lit in assumptions:
            if lit == 0 or abs(lit) > self.num_vars:
                raise InsanityException("Assumption %s out of range [1, %s]" %
                                        (lit, self.num_vars))
        if self._contradiction:
            return self._result(UNSAT)
        for lit in list(self._units) + list(assumptions):
            if not self._enqueue(lit):
                return self._result(UNSAT)
        if not self._propagate(budget):
            return self._result(UNSAT)

        # Each entry is [variable, whether both values have been tried].
        stack = []
        while True:
            v = self._pick_branch_variable()
            if v is None:
                return self._result(SAT)
            self.decisions += 1
            self._check_budget(budget)
            self._trail_lim.append(len(self._trail))
            stack.append([v, False])
            self._assign(v if self._phase[v] else -v)
            while not self._propagate(budget):
                while stack and stack[-1][1]:
                    self._undo_level()
                    stack.pop()
                if not stack:
                    return self._result(UNSAT)
                v = stack[-1][0]
                tried = self._value[v]
                self._undo_level()
                self._trail_lim.append(len(self._trail))
                stack[-1][1] = True
                self._assign(-v if tried else v)


def solve(f, assumptions=(), budget=None, seed=None, tally=None):
    """Answer the satisfiability query for f.

    :return: a SolveResult; a SAT result carries a witness Assignment
    :raises BudgetExceededException: when ``budget`` steps run out
    """
    if tally is not None:
        tally.record()
    result = Solver(f, seed=seed).solve(assumptions, budget)
    logger.debug("Solved %r: %s after %s decisions, %s propagations" % (
        f, result.status, result.decisions, result.propagations))
    return result
