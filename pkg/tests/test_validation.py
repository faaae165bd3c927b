#!/usr/bin/env python
# -*- coding: utf-8 -*-
import io
import math
import os
import unittest
from fractions import Fraction

from stacount.formula import (CnfFormula, forced_count_formula,
                              generate_random_3cnf, read_dimacs)
from stacount.hashing import LazyChain
from stacount.lib.exceptions import InsanityException
from stacount.lib.rng_utils import derive_path, make_stream
from stacount.oracle import model_indices
from stacount.solver import solve
from stacount.stats import q_of
from stacount.validation import (LIMIT_CSV_COLUMNS, chain_unsat_frequency,
                                 compare_limit, draw_g_set,
                                 g_family_unsat_prob,
                                 hypergeometric_by_binomials,
                                 hypergeometric_unsat_prob, limit_unsat_prob,
                                 sample_g_family_models,
                                 sample_g_family_unsat, write_limit_csv)
from tests import TESTS_ROOT

CNF_EXAMPLES = os.path.join(TESTS_ROOT, 'examples', 'cnf')

SKIP_UNLESS_SLOW_TESTS = unittest.skipUnless(
    os.environ.get('STACOUNT_SLOW_TESTS'),
    "Set STACOUNT_SLOW_TESTS to run the long statistical checks.")


def within_three_sigma(test, observed, p, trials, sigmas=3):
    sigma = math.sqrt(p * (1 - p) / trials)
    test.assertLessEqual(abs(observed - p), sigmas * sigma + 1e-12,
                         msg='observed %.4f, expected %.4f' % (observed, p))


class ExactProbabilityTest(unittest.TestCase):
    def test_small_cases(self):
        self.assertEqual(hypergeometric_unsat_prob(2, 2, 1), Fraction(1, 6))
        self.assertEqual(hypergeometric_unsat_prob(3, 0, 2), Fraction(1))
        # More models than the sample can miss.
        self.assertEqual(hypergeometric_unsat_prob(2, 3, 1), Fraction(0))
        self.assertEqual(limit_unsat_prob(2, 1), Fraction(1, 4))

    def test_product_matches_binomials(self):
        for n in range(1, 11):
            for d in range(1, n + 1):
                for count in sorted({0, 1, 2, 5, 2 ** n // 3, 2 ** n}):
                    self.assertEqual(
                        hypergeometric_unsat_prob(n, count, d),
                        hypergeometric_by_binomials(n, count, d),
                        msg='n=%s count=%s d=%s' % (n, count, d))

    def test_independent_family(self):
        for n in (2, 4, 6):
            for count in (1, 2, 3):
                self.assertEqual(g_family_unsat_prob(n, count, 1),
                                 hypergeometric_unsat_prob(n, count, 1))
        self.assertAlmostEqual(float(g_family_unsat_prob(4, 3, 2)),
                               0.403333, places=6)
        self.assertAlmostEqual(float(limit_unsat_prob(3, 2)), 0.421875,
                               places=6)

    def test_bad_sizes(self):
        for args in ((31, 1, 1), (4, 1, 0), (4, 1, 5), (3, 9, 1)):
            with self.assertRaises(InsanityException):
                hypergeometric_unsat_prob(*args)


class LimitTest(unittest.TestCase):
    def test_gap_shrinks_with_n(self):
        rows = compare_limit([8, 2, 3, 4, 6], 2, 1)
        self.assertEqual([r.n for r in rows], [2, 3, 4, 6, 8])
        gaps = [r.gap for r in rows]
        for row in rows:
            self.assertEqual(row.gap, Fraction(1, 4 * (2 ** row.n - 1)))
            self.assertEqual(row.single_subset, row.independent)
            self.assertIsNone(row.sampled)
        self.assertEqual(gaps, sorted(gaps, reverse=True))
        self.assertEqual(len(set(gaps)), len(gaps))
        self.assertAlmostEqual(float(rows[0].gap), 1 / 12.0, places=12)

    def test_csv(self):
        out = io.StringIO()
        write_limit_csv(compare_limit([2, 4], 2, 1, trials=50), out)
        lines = out.getvalue().splitlines()
        self.assertEqual(lines[0], ','.join(LIMIT_CSV_COLUMNS))
        self.assertEqual(len(lines), 3)
        self.assertTrue(lines[1].startswith('2,2,1,0.1666'))


class IdealizedSamplerTest(unittest.TestCase):
    def test_draw_is_half_of_the_space(self):
        mask = draw_g_set(6, make_stream(1))
        self.assertEqual(mask.sum(), 32)
        self.assertEqual(len(mask), 64)

    def test_each_point_is_drawn_half_the_time(self):
        stream = make_stream(2)
        hits = sum(draw_g_set(5, stream).astype(int) for _ in range(2000))
        for count in hits:
            # 32 points at once, so allow a wider band.
            within_three_sigma(self, count / 2000.0, 0.5, 2000, sigmas=5)

    def test_matches_the_single_subset_law(self):
        for n in (4, 8, 10):
            p = float(hypergeometric_unsat_prob(n, 3, 1))
            observed = sample_g_family_models(n, [0, 5, 7], 1, 3000, (40, n))
            within_three_sigma(self, observed, p, 3000)

    def test_matches_inclusion_exclusion_for_deeper_chains(self):
        p = float(g_family_unsat_prob(6, 3, 2))
        observed = sample_g_family_models(6, [1, 2, 3], 2, 3000, 41)
        within_three_sigma(self, observed, p, 3000)

    def test_formula_front_end(self):
        f = read_dimacs(os.path.join(CNF_EXAMPLES, 'simple_or.cnf'))
        self.assertEqual(sample_g_family_unsat(f, 1, 100, 0),
                         sample_g_family_models(2, [1, 2, 3], 1, 100, 0))
        unsat = read_dimacs(os.path.join(CNF_EXAMPLES, 'unsat.cnf'))
        self.assertEqual(sample_g_family_unsat(unsat, 1, 10, 0), 1.0)
        with self.assertRaises(InsanityException):
            sample_g_family_unsat(CnfFormula(15), 1, 10, 0)


class ChainFrequencyTest(unittest.TestCase):
    def test_agrees_with_the_solver(self):
        f = read_dimacs(os.path.join(CNF_EXAMPLES, 'split_lines.cnf'))
        for d in (3, 5):
            unsat = sum(
                1 for c in range(40)
                if not solve(LazyChain(f, derive_path(6, c)).formula(d))
                .is_sat)
            self.assertEqual(chain_unsat_frequency(f, d, 40, 6),
                             unsat / 40.0)

    def test_degenerate_inputs(self):
        unsat = read_dimacs(os.path.join(CNF_EXAMPLES, 'unsat.cnf'))
        self.assertEqual(chain_unsat_frequency(unsat, 2, 10, 0), 1.0)
        f = forced_count_formula(6, 2)
        self.assertEqual(chain_unsat_frequency(f, 0, 10, 0), 0.0)

    @SKIP_UNLESS_SLOW_TESTS
    def test_matches_the_depth_model(self):
        checked = 0
        for seed in range(10):
            f = generate_random_3cnf(14, 40, seed)
            models = model_indices(f)
            count = len(models)
            if count < 20:
                continue
            d = min(range(1, 15), key=lambda d: abs(q_of(d, count) - 0.5))
            q = q_of(d, count)
            self.assertTrue(0.2 <= q <= 0.8)
            observed = chain_unsat_frequency(f, d, 4000, (50, seed),
                                             models=models)
            self.assertAlmostEqual(observed, q, delta=0.03,
                                   msg='seed %s count %s d %s' % (
                                       seed, count, d))
            checked += 1
            if checked == 3:
                break
        self.assertEqual(checked, 3)


if __name__ == '__main__':
    unittest.main()
