#!/usr/bin/env python
# -*- coding: utf-8 -*-
import csv
import io
import logging
import os
import unittest

import jsondate3 as json
import mock

from stacount.formula import generate_random_3cnf, read_dimacs
from stacount.harness import (APPROXMC, CSV_COLUMNS, EXACT, STAC, STAC_DSC,
                              ExperimentConfig, ExperimentReport,
                              InstanceSpec, query_ratios, run_bench,
                              run_experiment, within_factor)
from stacount.lib.exceptions import (BudgetExceededException,
                                     InsanityException, OracleRefusalException)
from tests import TESTS_ROOT

CNF_EXAMPLES = os.path.join(TESTS_ROOT, 'examples', 'cnf')

SKIP_UNLESS_SLOW_TESTS = unittest.skipUnless(
    os.environ.get('STACOUNT_SLOW_TESTS'),
    "Set STACOUNT_SLOW_TESTS to run the long statistical checks.")


def rows_without_clock(report):
    return report.comparable()['rows']


class InstanceSpecTest(unittest.TestCase):
    def test_generated_instances(self):
        spec = InstanceSpec('gen:n=10,m=20,seed=3')
        self.assertEqual(spec.kind, 'gen')
        self.assertEqual(spec.params, {'n': 10, 'm': 20, 'seed': 3})
        self.assertEqual(spec.load(), generate_random_3cnf(10, 20, 3))
        self.assertEqual(spec.name, 'gen:n=10,m=20,seed=3')
        f = InstanceSpec('forced:n=6,k=2').load()
        self.assertEqual(f.num_vars, 6)
        self.assertEqual(len(f.clauses), 4)

    def test_paths(self):
        path = os.path.join(CNF_EXAMPLES, 'simple_or.cnf')
        spec = InstanceSpec(path)
        self.assertEqual(spec.kind, 'path')
        self.assertEqual(spec.load(), read_dimacs(path))
        self.assertEqual(InstanceSpec('C:/cnf/x.cnf').kind, 'path')

    def test_bad_parameters(self):
        for text in ('forced:n=5', 'gen:n=x,m=1,seed=1',
                     'forced:n=5,k=2,z=1', 'gen:n=4;m=2;seed=1'):
            with self.assertRaises(InsanityException, msg=text):
                InstanceSpec(text)


class ExperimentConfigTest(unittest.TestCase):
    def setUp(self):
        logging.disable(logging.CRITICAL)

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def test_defaults(self):
        cfg = ExperimentConfig(['forced:n=6,k=3'])
        self.assertEqual(cfg.algorithm, STAC_DSC)
        self.assertEqual(cfg.T, 22)
        self.assertEqual(cfg.seed, (0,))
        self.assertEqual(cfg.effective_pivot(), 50)
        d = cfg.to_dict()
        self.assertEqual(d['runs'], 22)
        self.assertIsNone(d['pivot'])
        self.assertEqual(d['instances'], ['forced:n=6,k=3'])

    def test_overrides(self):
        cfg = ExperimentConfig(['forced:n=6,k=3'], algorithm=APPROXMC,
                               runs=9, pivot=12, seed=[4, 2])
        self.assertEqual(cfg.T, 9)
        self.assertEqual(cfg.to_dict()['pivot'], 12)
        self.assertEqual(cfg.to_dict()['seed'], [4, 2])
        self.assertIsNone(cfg.copy_with(algorithm=EXACT).to_dict()['runs'])

    def test_copy_keeps_everything_else(self):
        cfg = ExperimentConfig(['forced:n=6,k=3'], epsilon=0.4, seed=7,
                               repetitions=3)
        other = cfg.copy_with(algorithm=STAC)
        self.assertEqual(other.algorithm, STAC)
        self.assertEqual(cfg.algorithm, STAC_DSC)
        self.assertEqual(other.seed, (7,))
        self.assertEqual(other.T, 57)
        self.assertEqual(other.repetitions, 3)

    def test_rejects_bad_settings(self):
        bad = (
            {'instances': []},
            {'algorithm': 'magic'},
            {'repetitions': 0},
            {'interval_method': 'exact'},
            {'offset': 0},
            {'workers': 0},
            {'output_format': 'xml'},
            {'runs': 0},
            {'pivot': 0},
            {'epsilon': 0},
            {'delta': 1},
            {'seed': []},
        )
        for changes in bad:
            kwargs = {'instances': ['forced:n=4,k=1']}
            kwargs.update(changes)
            with self.assertRaises(InsanityException, msg=repr(changes)):
                ExperimentConfig(**kwargs)

    def test_worker_cap(self):
        cfg = ExperimentConfig(['forced:n=4,k=1'], workers=8)
        with mock.patch.dict(os.environ, {'STACOUNT_MAX_WORKERS': '2'}):
            self.assertEqual(cfg.max_workers(), 2)
        with mock.patch.dict(os.environ, {'STACOUNT_MAX_WORKERS': 'lots'}):
            self.assertEqual(cfg.max_workers(), 8)
        with mock.patch.dict(os.environ, {'STACOUNT_MAX_WORKERS': '0'}):
            self.assertEqual(cfg.max_workers(), 1)


class RunExperimentTest(unittest.TestCase):
    def setUp(self):
        logging.disable(logging.CRITICAL)

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def test_exact_counter_is_always_right(self):
        cfg = ExperimentConfig(['forced:n=6,k=3',
                                os.path.join(CNF_EXAMPLES, 'split_lines.cnf')],
                               algorithm=EXACT, repetitions=4)
        report = run_experiment(cfg)
        self.assertEqual([row['exact_count'] for row in report.rows], [8, 22])
        for row in report.rows:
            self.assertEqual(row['frequency'], 4)
            self.assertEqual(row['estimates'], [row['exact_count']] * 4)
            self.assertEqual(row['mean_iterations'], 0)
            self.assertEqual(row['median_estimate'], row['exact_count'])

    def test_replays_from_its_config(self):
        cfg = ExperimentConfig(['forced:n=8,k=4', 'gen:n=8,m=12,seed=2'],
                               algorithm=STAC, repetitions=3, seed=5,
                               runs=10)
        first = run_experiment(cfg)
        second = run_experiment(cfg)
        self.assertEqual(first.comparable(), second.comparable())
        self.assertNotIn('started_at', first.comparable())

    def test_repetitions_get_their_own_seeds(self):
        cfg = ExperimentConfig(['forced:n=4,k=2', 'forced:n=5,k=2'],
                               algorithm=STAC, repetitions=2, seed=9, runs=3)
        with mock.patch('stacount.harness.run_repetition',
                        return_value={'estimate': 4.0, 'iterations': 3,
                                      'queries': 7, 'wall_time': 0.0,
                                      'details': {}}) as repetition:
            report = run_experiment(cfg)
        seeds = [c[0][2] for c in repetition.call_args_list]
        self.assertEqual(seeds, [(9, 0, 0), (9, 0, 1), (9, 1, 0), (9, 1, 1)])
        self.assertEqual([row['frequency'] for row in report.rows], [2, 2])
        self.assertEqual(report.rows[0]['mean_queries'], 7.0)

    def test_pool_gives_the_same_rows(self):
        kwargs = {'instances': ['forced:n=8,k=3'], 'algorithm': STAC_DSC,
                  'repetitions': 4, 'seed': 2}
        with mock.patch.dict(os.environ, {'STACOUNT_MAX_WORKERS': '2'}):
            pooled = run_experiment(ExperimentConfig(workers=2, **kwargs))
        inline = run_experiment(ExperimentConfig(workers=1, **kwargs))
        self.assertEqual(rows_without_clock(pooled), rows_without_clock(inline))

    def test_no_frequency_without_an_exact_count(self):
        cfg = ExperimentConfig(['forced:n=6,k=2'], algorithm=STAC,
                               repetitions=2, runs=3)
        with mock.patch('stacount.harness.count_exact',
                        side_effect=OracleRefusalException('too big')):
            report = run_experiment(cfg)
        row = report.rows[0]
        self.assertIsNone(row['exact_count'])
        self.assertIsNone(row['frequency'])
        self.assertEqual(len(row['estimates']), 2)
        line = list(csv.reader(io.StringIO(report.to_csv())))[1]
        self.assertEqual(line[CSV_COLUMNS.index('frequency')], '')
        self.assertEqual(line[CSV_COLUMNS.index('exact_count')], '')

    def test_exact_count_respects_the_budget(self):
        cfg = ExperimentConfig(['forced:n=6,k=2'], algorithm=STAC,
                               repetitions=1, runs=3, budget=5000)
        with mock.patch('stacount.harness.count_exact',
                        side_effect=BudgetExceededException('out', steps=9)
                        ) as exact:
            report = run_experiment(cfg)
        exact.assert_called_once_with(mock.ANY, budget=5000)
        self.assertIsNone(report.rows[0]['frequency'])
        self.assertEqual(len(report.rows[0]['estimates']), 1)

    def test_within_factor(self):
        self.assertTrue(within_factor(10, 10, 0.8))
        self.assertTrue(within_factor(18, 10, 0.8))
        self.assertFalse(within_factor(18.1, 10, 0.8))
        self.assertTrue(within_factor(0, 0, 0.8))
        self.assertFalse(within_factor(1, 0, 0.8))


class ReportTest(unittest.TestCase):
    def setUp(self):
        logging.disable(logging.CRITICAL)
        cfg = ExperimentConfig(['forced:n=5,k=2'], algorithm=EXACT,
                               repetitions=2, seed=[3, 1])
        self.report = run_experiment(cfg)

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def test_json_layout(self):
        loaded = json.loads(self.report.to_json())
        self.assertEqual(set(loaded),
                         {'config', 'rows', 'versions', 'started_at'})
        self.assertEqual(set(loaded['versions']),
                         {'stacount', 'numpy', 'python'})
        self.assertEqual(loaded['rows'][0]['estimates'], [4, 4])
        self.assertEqual(loaded['config']['algorithm'], EXACT)

    def test_csv_layout(self):
        lines = self.report.to_csv().splitlines()
        self.assertEqual(lines[0], ','.join(CSV_COLUMNS))
        self.assertEqual(len(lines), 2)
        fields = list(csv.reader(io.StringIO(self.report.to_csv())))[1]
        self.assertEqual(fields[CSV_COLUMNS.index('master_seed')], '3 1')
        self.assertEqual(fields[CSV_COLUMNS.index('frequency')], '2')

    def test_render_follows_the_format(self):
        self.assertTrue(self.report.render().startswith('{'))
        self.report.config['output_format'] = 'csv'
        self.assertTrue(self.report.render().startswith('instance,'))


class BenchTest(unittest.TestCase):
    def setUp(self):
        logging.disable(logging.CRITICAL)

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def test_query_ratios(self):
        stac_report = ExperimentReport({}, [
            {'instance': 'a', 'mean_queries': 10.0},
            {'instance': 'b', 'mean_queries': 6.0},
            {'instance': 'c', 'mean_queries': 6.0},
        ])
        approxmc_report = ExperimentReport({}, [
            {'instance': 'a', 'mean_queries': 40.0},
            {'instance': 'b', 'mean_queries': 0.0},
        ])
        self.assertEqual(query_ratios(stac_report, approxmc_report),
                         {'a': 0.25})

    def test_run_bench(self):
        cfg = ExperimentConfig(['forced:n=8,k=3'], repetitions=2, runs=5)
        reports, ratios = run_bench(cfg, [STAC, APPROXMC])
        self.assertEqual(set(reports), {STAC, APPROXMC})
        self.assertEqual(reports[APPROXMC].config['algorithm'], APPROXMC)
        self.assertEqual(reports[STAC].config['seed'],
                         reports[APPROXMC].config['seed'])
        self.assertEqual(list(ratios), [STAC])
        self.assertIn('forced:n=8,k=3', ratios[STAC])
        _, ratios = run_bench(cfg, [STAC])
        self.assertEqual(ratios, {})


class AcceptanceTest(unittest.TestCase):
    """Full-size frequency checks on random 3-CNF."""

    def setUp(self):
        logging.disable(logging.CRITICAL)

    def tearDown(self):
        logging.disable(logging.NOTSET)

    @SKIP_UNLESS_SLOW_TESTS
    def test_default_accuracy(self):
        instances = ['gen:n=14,m=40,seed=%s' % s for s in range(5)]
        report = run_experiment(ExperimentConfig(instances, workers=None))
        for row in report.rows:
            self.assertGreaterEqual(row['frequency'], 70, msg=row['instance'])
            self.assertLessEqual(row['mean_iterations'], 16,
                                 msg=row['instance'])

    @SKIP_UNLESS_SLOW_TESTS
    def test_tight_accuracy(self):
        # Smaller instances than the default check; the run count per
        # repetition is far higher here.
        instances = ['gen:n=12,m=36,seed=%s' % s for s in range(5)]
        report = run_experiment(ExperimentConfig(
            instances, epsilon=0.2, delta=0.1, workers=None))
        self.assertEqual(len(report.rows), 5)
        for row in report.rows:
            self.assertGreaterEqual(row['frequency'], 84, msg=row['instance'])


if __name__ == '__main__':
    unittest.main()
