#!/usr/bin/env python
# -*- coding: utf-8 -*-
import os
import unittest

from stacount.formula import (CONTRADICTION, Assignment, CnfFormula,
                              XorConstraint, generate_random_3cnf,
                              read_dimacs)
from stacount.hashing import LazyChain
from stacount.lib.exceptions import (BudgetExceededException,
                                     InsanityException)
from stacount.lib.rng_utils import make_stream
from stacount.oracle import model_indices
from stacount.solver import SAT, UNSAT, QueryTally, Solver, evaluate, solve
from tests import TESTS_ROOT

CNF_EXAMPLES = os.path.join(TESTS_ROOT, 'examples', 'cnf')

SKIP_UNLESS_SLOW_TESTS = unittest.skipUnless(
    os.environ.get('STACOUNT_SLOW_TESTS'),
    "Set STACOUNT_SLOW_TESTS to run the long statistical checks.")


def random_mixed_formula(seed):
    """Small random CNF plus a few XORs, dense enough to be unsat often."""
    stream = make_stream(seed)
    n = int(stream.integers(3, 11))
    clauses = []
    for _ in range(int(stream.integers(0, 3 * n))):
        width = int(stream.integers(1, 4))
        variables = stream.choice(n, size=min(width, n), replace=False) + 1
        signs = stream.integers(0, 2, size=len(variables))
        clauses.append([int(v) if s else -int(v)
                        for v, s in zip(variables, signs)])
    xors = []
    for _ in range(int(stream.integers(0, 4))):
        coeffs = stream.integers(0, 2, size=n)
        xors.append(XorConstraint([i + 1 for i in range(n) if coeffs[i]],
                                  bool(stream.integers(0, 2))))
    return CnfFormula(n, clauses, xors)


def brute_force_sat(f):
    return any(evaluate(f, Assignment.from_int(code, f.num_vars))
               for code in range(1 << f.num_vars))


class EvaluateTest(unittest.TestCase):
    def test_clauses_and_xors(self):
        f = CnfFormula(3, [[1, 2]], [XorConstraint([2, 3], True)])
        self.assertTrue(evaluate(f, Assignment([True, False, True])))
        self.assertFalse(evaluate(f, Assignment([True, True, True])))
        self.assertFalse(evaluate(f, Assignment([False, False, True])))

    def test_accepts_a_mapping(self):
        f = CnfFormula(2, [[-1, 2]])
        self.assertTrue(evaluate(f, {1: True, 2: True}))

    def test_wrong_size_is_refused(self):
        with self.assertRaises(InsanityException):
            evaluate(CnfFormula(3, [[1]]), Assignment([True, True]))


class SolveTest(unittest.TestCase):
    def test_examples(self):
        expected = {
            'simple_or.cnf': SAT,
            'xor_chain.cnf': SAT,
            'mixed.cnf': SAT,
            'unsat.cnf': UNSAT,
            'free_vars.cnf': SAT,
            'implication_chain.cnf': SAT,
            'split_lines.cnf': SAT,
        }
        for name, status in expected.items():
            f = read_dimacs(os.path.join(CNF_EXAMPLES, name))
            result = solve(f)
            self.assertEqual(result.status, status, msg=name)
            if result.is_sat:
                self.assertTrue(evaluate(f, result.witness), msg=name)
            else:
                self.assertIsNone(result.witness)

    def test_matches_brute_force(self):
        for seed in range(150):
            f = random_mixed_formula(seed)
            result = solve(f)
            self.assertEqual(result.is_sat, brute_force_sat(f),
                             msg='seed %s: %r' % (seed, f))
            if result.is_sat:
                self.assertTrue(evaluate(f, result.witness))

    def test_seeded_phase_gives_the_same_answer(self):
        for seed in range(40):
            f = random_mixed_formula(seed)
            self.assertEqual(solve(f).status, solve(f, seed=seed).status)

    def test_inconsistent_xors_without_clauses(self):
        f = CnfFormula(4, xors=[XorConstraint([1, 2], True),
                                XorConstraint([2, 3], True),
                                XorConstraint([1, 3], True)])
        self.assertEqual(solve(f).status, UNSAT)
        self.assertEqual(solve(f).decisions, 0)

    def test_contradiction(self):
        self.assertEqual(solve(CnfFormula(2, xors=[CONTRADICTION])).status,
                         UNSAT)

    def test_xor_conflict_survives_backtracking(self):
        # The clauses force 2 and -3, which the XOR rejects. Branching on 1
        # (in no XOR) rebuilds the same XOR assignment on both sides.
        f = CnfFormula(3, [[1, 2], [1, -3], [-1, 2], [-1, -3]],
                       [XorConstraint([2, 3], False)])
        self.assertEqual(solve(f).status, UNSAT)
        self.assertEqual(model_indices(f), [])
        solver = Solver(f)
        self.assertFalse(solver.solve().is_sat)
        self.assertFalse(solver.solve().is_sat)

    def test_assumptions(self):
        f = CnfFormula(2, [[1, 2]])
        self.assertEqual(solve(f, assumptions=[-1, -2]).status, UNSAT)
        result = solve(f, assumptions=[-1])
        self.assertTrue(result.is_sat)
        self.assertEqual(result.witness.literals(), [-1, 2])
        with self.assertRaises(InsanityException):
            solve(f, assumptions=[3])

    def test_budget(self):
        f = CnfFormula(5)
        with self.assertRaises(BudgetExceededException) as cm:
            solve(f, budget=0)
        self.assertEqual(cm.exception.steps, 1)
        self.assertTrue(solve(f, budget=100).is_sat)

    def test_tally_counts_calls(self):
        tally = QueryTally()
        f = CnfFormula(2, [[1]])
        solve(f, tally=tally)
        solve(f, tally=tally)
        self.assertEqual(tally.calls, 2)


class HashedChainSolveTest(unittest.TestCase):
    """Hashed prefixes of random 3-CNF, the formulas the counters ask
    about, checked against the surviving models."""

    def check_chains(self, formula_seeds, chains, n=12, m=40):
        for s in formula_seeds:
            f = generate_random_3cnf(n, m, s)
            models = [Assignment.from_int(code, n)
                      for code in model_indices(f)]
            for c in range(chains):
                chain = LazyChain(f, (s, c))
                survivors = models
                seen_unsat = False
                for d in range(n + 1):
                    if d:
                        h = chain.hash(d)
                        survivors = [a for a in survivors if h.evaluate(a)]
                    result = solve(chain.formula(d))
                    where = 'formula %s chain %s depth %s' % (s, c, d)
                    self.assertEqual(result.is_sat, bool(survivors),
                                     msg=where)
                    if result.is_sat:
                        self.assertTrue(evaluate(chain.formula(d),
                                                 result.witness), msg=where)
                        self.assertFalse(seen_unsat, msg=where)
                    else:
                        seen_unsat = True

    def test_random_chains(self):
        self.check_chains(range(8), 5)

    @SKIP_UNLESS_SLOW_TESTS
    def test_many_random_chains(self):
        self.check_chains(range(40), 20)


class IncrementalSolverTest(unittest.TestCase):
    def test_blocking_every_model_ends_unsat(self):
        f = read_dimacs(os.path.join(CNF_EXAMPLES, 'mixed.cnf'))
        solver = Solver(f)
        seen = set()
        while True:
            result = solver.solve()
            if not result.is_sat:
                break
            self.assertNotIn(result.witness, seen)
            seen.add(result.witness)
            solver.add_clause([-lit for lit in result.witness.literals()])
        self.assertEqual(len(seen), 4)

    def test_empty_added_clause(self):
        solver = Solver(CnfFormula(1))
        solver.add_clause([])
        self.assertFalse(solver.solve().is_sat)

    def test_added_clause_range(self):
        with self.assertRaises(InsanityException):
            Solver(CnfFormula(2)).add_clause([3])


if __name__ == '__main__':
    unittest.main()
