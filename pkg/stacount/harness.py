# -*- coding: utf-8 -*-
"""Repeated-run experiments and their reports.

An experiment runs one counter ``repetitions`` times on every instance and
reports, per instance, how often the estimate landed within a factor of
(1 + eps) of the exact count, together with the mean number of runs and
solve queries each repetition needed. Repetition i of instance j is seeded
with (master, j, i), so a report replays exactly from its config.
"""
import csv
import io
import os
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime

import jsondate3 as json
import numpy as np
from dateutil.tz import tzutc

from . import __version__
from .approxmc import approxmc, default_pivot
from .counters import DEFAULT_OFFSET, stac, stac_dsc
from .formula import forced_count_formula, generate_random_3cnf, read_dimacs
from .lib.exceptions import (BudgetExceededException, InsanityException,
                             OracleRefusalException)
from .lib.log_tools import make_default_logger
from .lib.rng_utils import seed_path
from .lib.utils import lower_median, mean
from .oracle import count_exact
from .solver import QueryTally
from .stats import INTERVAL_METHODS, WILSON, AccuracyParams, compute_T

logger = make_default_logger()

MAX_WORKERS_ENV = 'STACOUNT_MAX_WORKERS'

STAC = 'stac'
STAC_DSC = 'stac-dsc'
APPROXMC = 'approxmc'
EXACT = 'exact'
ALGORITHMS = (STAC, STAC_DSC, APPROXMC, EXACT)
OUTPUT_FORMATS = ('json', 'csv')

WALL_TIME_FIELDS = ('mean_wall_time',)
CSV_COLUMNS = ['instance', 'algorithm', 'n', 'exact_count', 'repetitions',
               'frequency', 'mean_estimate', 'median_estimate',
               'mean_iterations', 'mean_queries', 'mean_wall_time',
               'master_seed']


class InstanceSpec(object):
    """Where an instance comes from: a DIMACS path, ``gen:n=..,m=..,seed=..``
    for a random 3-CNF, or ``forced:n=..,k=..`` for a formula with exactly
    2**k models."""

    GENERATORS = {
        'gen': (('n', 'm', 'seed'), generate_random_3cnf),
        'forced': (('n', 'k'), forced_count_formula),
    }

    def __init__(self, text):
        self.text = text
        self.kind, self.params = self._parse(text)

    @classmethod
    def _parse(cls, text):
        kind, sep, rest = text.partition(':')
        if not sep or kind not in cls.GENERATORS:
            return 'path', {}
        names = cls.GENERATORS[kind][0]
        params = {}
        for item in rest.split(','):
            key, eq, value = item.strip().partition('=')
            if not eq or key not in names:
                raise InsanityException("Bad %s parameter %r in %r; expected "
                                        "%s" % (kind, item, text,
                                                ', '.join(names)))
            try:
                params[key] = int(value)
            except ValueError:
                raise InsanityException("%s=%r in %r is not an integer" % (
                    key, value, text))
        missing = [name for name in names if name not in params]
        if missing:
            raise InsanityException("%r is missing %s" % (text,
                                                          ', '.join(missing)))
        return kind, params

    @property
    def name(self):
        return self.text

    def load(self):
        if self.kind == 'path':
            return read_dimacs(self.text)
        names, make = self.GENERATORS[self.kind]
        return make(*[self.params[name] for name in names])

    def __repr__(self):
        return '<InstanceSpec %s>' % self.text


class ExperimentConfig(object):
    """Everything that determines an experiment. Validated on construction.

    :param runs: fixed T for stac and approxmc, and the cap on runs for
    stac-dsc; None means compute_T(epsilon, delta)
    :param pivot: approxmc pivot; None means default_pivot(epsilon)
    """

    def __init__(self, instances, algorithm=STAC_DSC, epsilon=0.8, delta=0.2,
                 repetitions=100, seed=0, interval_method=WILSON,
                 leapfrog=True, offset=DEFAULT_OFFSET, workers=1, budget=None,
                 output_format='json', runs=None, pivot=None):
        self.instances = [i if isinstance(i, InstanceSpec) else
                          InstanceSpec(i) for i in instances]
        self.algorithm = algorithm
        self.params = AccuracyParams(epsilon, delta)
        self.repetitions = repetitions
        self.seed = seed_path(seed)
        self.interval_method = interval_method
        self.leapfrog = bool(leapfrog)
        self.offset = offset
        self.workers = workers
        self.budget = budget
        self.output_format = output_format
        self.runs = runs
        self.pivot = pivot
        self._check()

    def _check(self):
        if not self.instances:
            raise InsanityException("An experiment needs at least one "
                                    "instance")
        if self.algorithm not in ALGORITHMS:
            raise InsanityException("Unknown algorithm %r, expected one of %s"
                                    % (self.algorithm, ALGORITHMS))
        if self.repetitions < 1:
            raise InsanityException("repetitions must be at least 1, got %s" %
                                    self.repetitions)
        if self.interval_method not in INTERVAL_METHODS:
            raise InsanityException("Unknown interval method %r" %
                                    self.interval_method)
        if self.offset < 1:
            raise InsanityException("offset must be at least 1, got %s" %
                                    self.offset)
        if self.workers is not None and self.workers < 1:
            raise InsanityException("workers must be at least 1, got %s" %
                                    self.workers)
        if self.output_format not in OUTPUT_FORMATS:
            raise InsanityException("Unknown output format %r" %
                                    self.output_format)
        if self.runs is not None and self.runs < 1:
            raise InsanityException("runs must be at least 1, got %s" %
                                    self.runs)
        if self.pivot is not None and self.pivot < 1:
            raise InsanityException("pivot must be at least 1, got %s" %
                                    self.pivot)

    @property
    def epsilon(self):
        return self.params.epsilon

    @property
    def delta(self):
        return self.params.delta

    @property
    def T(self):
        return self.runs if self.runs is not None else compute_T(self.params)

    def effective_pivot(self):
        return self.pivot if self.pivot is not None else default_pivot(
            self.epsilon)

    def max_workers(self):
        """Requested workers, capped by STACOUNT_MAX_WORKERS when set."""
        workers = self.workers or os.cpu_count() or 1
        cap = os.environ.get(MAX_WORKERS_ENV)
        if cap:
            try:
                workers = min(workers, max(1, int(cap)))
            except ValueError:
                logger.warning("Ignoring non-integer %s=%r" % (MAX_WORKERS_ENV,
                                                               cap))
        return workers

    def copy_with(self, **changes):
        kwargs = {
            'instances': self.instances, 'algorithm': self.algorithm,
            'epsilon': self.epsilon, 'delta': self.delta,
            'repetitions': self.repetitions, 'seed': self.seed,
            'interval_method': self.interval_method,
            'leapfrog': self.leapfrog, 'offset': self.offset,
            'workers': self.workers, 'budget': self.budget,
            'output_format': self.output_format, 'runs': self.runs,
            'pivot': self.pivot,
        }
        kwargs.update(changes)
        return ExperimentConfig(**kwargs)

    def to_dict(self):
        return {
            'instances': [i.name for i in self.instances],
            'algorithm': self.algorithm,
            'epsilon': self.epsilon,
            'delta': self.delta,
            'repetitions': self.repetitions,
            'seed': list(self.seed),
            'interval_method': self.interval_method,
            'leapfrog': self.leapfrog,
            'offset': self.offset,
            'workers': self.workers,
            'budget': self.budget,
            'output_format': self.output_format,
            'runs': self.T if self.algorithm != EXACT else None,
            'pivot': (self.effective_pivot() if self.algorithm == APPROXMC
                      else None),
        }


def run_repetition(f, cfg, seed):
    """One repetition of the configured counter.

    :return: dict with the estimate, iterations, solve queries and wall time
    """
    start = time.time()
    if cfg.algorithm == EXACT:
        estimate, iterations, queries = count_exact(f, budget=cfg.budget), 0, 0
        details = {}
    elif cfg.algorithm == APPROXMC:
        tally = QueryTally()
        estimate = approxmc(f, cfg.T, cfg.effective_pivot(), seed,
                            budget=cfg.budget, tally=tally)
        iterations, queries = cfg.T, tally.calls
        details = {'pivot': cfg.effective_pivot()}
    else:
        counter = stac_dsc if cfg.algorithm == STAC_DSC else stac
        result = counter(f, cfg.T, params=cfg.params, seed=seed,
                         interval_method=cfg.interval_method,
                         leapfrog=cfg.leapfrog, offset=cfg.offset,
                         budget=cfg.budget)
        estimate = result.estimate
        iterations, queries = result.runs_used, result.sat_queries
        details = {'chosen_d': result.chosen_d,
                   'interval': result.to_dict()['interval'],
                   'stopped_early': result.stopped_early}
    return {'estimate': estimate, 'iterations': iterations,
            'queries': queries, 'wall_time': time.time() - start,
            'details': details}


def _run_task(task):
    f, cfg, seed = task
    return run_repetition(f, cfg, seed)


def within_factor(estimate, exact, epsilon):
    return exact / (1 + epsilon) <= estimate <= (1 + epsilon) * exact


def _exact_or_none(f, name, budget=None):
    try:
        return count_exact(f, budget=budget)
    except (OracleRefusalException, BudgetExceededException) as e:
        logger.warning("No exact count for %s, frequency unavailable: %s" % (
            name, e))
        return None


def _summarize(spec, f, cfg, exact, outcomes):
    estimates = [o['estimate'] for o in outcomes]
    frequency = None
    if exact is not None:
        frequency = sum(1 for e in estimates
                        if within_factor(e, exact, cfg.epsilon))
    return {
        'instance': spec.name,
        'algorithm': cfg.algorithm,
        'n': f.num_vars,
        'exact_count': exact,
        'repetitions': cfg.repetitions,
        'frequency': frequency,
        'estimates': estimates,
        'mean_estimate': mean(estimates),
        'median_estimate': lower_median(estimates),
        'mean_iterations': mean(o['iterations'] for o in outcomes),
        'mean_queries': mean(o['queries'] for o in outcomes),
        'mean_wall_time': mean(o['wall_time'] for o in outcomes),
        'master_seed': list(cfg.seed),
    }


def run_experiment(cfg):
    """Run cfg.repetitions repetitions per instance and summarize them.

    Repetitions fan out over a process pool when more than one worker is
    allowed; results are merged back in repetition order.
    """
    started_at = datetime.now(tzutc())
    formulas = [spec.load() for spec in cfg.instances]
    exact_counts = [_exact_or_none(f, spec.name, cfg.budget)
                    for spec, f in zip(cfg.instances, formulas)]
    tasks = [(f, cfg, cfg.seed + (j, i))
             for j, f in enumerate(formulas)
             for i in range(cfg.repetitions)]
    workers = cfg.max_workers()
    logger.info("Starting %s: %s instances x %s repetitions on %s workers" %
                (cfg.algorithm, len(formulas), cfg.repetitions, workers))
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_task, tasks))
    else:
        outcomes = [_run_task(task) for task in tasks]

    rows = []
    for j, (spec, f) in enumerate(zip(cfg.instances, formulas)):
        chunk = outcomes[j * cfg.repetitions:(j + 1) * cfg.repetitions]
        row = _summarize(spec, f, cfg, exact_counts[j], chunk)
        logger.info("%s on %s: frequency %s/%s, mean runs %.2f, mean queries "
                    "%.2f" % (cfg.algorithm, spec.name, row['frequency'],
                              cfg.repetitions, row['mean_iterations'],
                              row['mean_queries']))
        rows.append(row)
    return ExperimentReport(cfg.to_dict(), rows, started_at)


def versions():
    return {
        'stacount': __version__,
        'numpy': np.__version__,
        'python': platform.python_version(),
    }


class ExperimentReport(object):
    """The rows of an experiment plus the config that reproduces them.

    JSON layout: {"config": {...}, "rows": [...], "versions": {...},
    "started_at": <UTC timestamp>}. Each row keeps the raw per-repetition
    estimates.
    """

    def __init__(self, config, rows, started_at=None, versions_=None):
        self.config = config
        self.rows = rows
        self.started_at = started_at or datetime.now(tzutc())
        self.versions = versions_ or versions()

    def as_dict(self):
        return {'config': self.config, 'rows': self.rows,
                'versions': self.versions, 'started_at': self.started_at}

    def comparable(self):
        """The report without anything that depends on the clock."""
        rows = [dict((k, v) for k, v in row.items()
                     if k not in WALL_TIME_FIELDS) for row in self.rows]
        return {'config': self.config, 'rows': rows,
                'versions': self.versions}

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)

    def to_csv(self):
        out = io.StringIO()
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            writer.writerow([
                ' '.join(str(s) for s in row[k]) if k == 'master_seed' else
                ('' if row[k] is None else row[k])
                for k in CSV_COLUMNS])
        return out.getvalue()

    def render(self):
        if self.config.get('output_format') == 'csv':
            return self.to_csv()
        return self.to_json()


def query_ratios(stac_report, approxmc_report):
    """Per instance, mean STAC queries over mean ApproxMC queries."""
    baseline = dict((row['instance'], row['mean_queries'])
                    for row in approxmc_report.rows)
    ratios = {}
    for row in stac_report.rows:
        other = baseline.get(row['instance'])
        if other:
            ratios[row['instance']] = row['mean_queries'] / other
    return ratios


def run_bench(base_cfg, algorithms):
    """Run the same instances and seeds under each algorithm.

    :return: (reports by algorithm, STAC/ApproxMC query ratios by STAC
    algorithm, empty when ApproxMC was not run)
    """
    reports = {}
    for algorithm in algorithms:
        cfg = base_cfg.copy_with(algorithm=algorithm)
        reports[algorithm] = run_experiment(cfg)
    ratios = {}
    if APPROXMC in reports:
        for algorithm in (STAC, STAC_DSC):
            if algorithm in reports:
                ratios[algorithm] = query_ratios(reports[algorithm],
                                                 reports[APPROXMC])
    return reports, ratios
