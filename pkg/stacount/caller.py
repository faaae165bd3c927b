# -*- coding: utf-8 -*-
"""Command line entry point.

    stacount count --algorithm stac-dsc --epsilon 0.8 --delta 0.2 --seed 7 f.cnf
    stacount bench --algorithms stac-dsc approxmc --repetitions 100 gen:n=14,m=40,seed=1
    stacount gen --n 12 --m 40 --seed 3 -o out.cnf
    stacount validate limit --n-grid 2 3 4 6 8 --count 2 --d 1
    stacount validate chain --d 3 --chains 2000 f.cnf
    stacount table-t --grid

Exit status is 0 on success, 1 on a usage error and 2 when the run fails.
"""
import argparse
import io
import sys

import jsondate3 as json

from .formula import emit_dimacs, generate_random_3cnf
from .harness import (ALGORITHMS, APPROXMC, CSV_COLUMNS, STAC_DSC,
                      ExperimentConfig, InstanceSpec, run_bench,
                      run_repetition)
from .lib.exceptions import (BudgetExceededException, InsanityException,
                             OracleRefusalException, ParsingException,
                             UnusableDepthException)
from .lib.log_tools import errprint, make_default_logger
from .lib.rng_utils import seed_path
from .oracle import model_indices
from .stats import (DEFAULT_DELTAS, DEFAULT_EPSILONS, INTERVAL_METHODS,
                    WILSON, q_of, t_table)
from .validation import (chain_unsat_frequency, compare_limit,
                         sample_g_family_models, write_limit_csv,
                         MAX_SAMPLED_VARS)

logger = make_default_logger()

RUNTIME_ERRORS = (ParsingException, BudgetExceededException,
                  OracleRefusalException, InsanityException,
                  UnusableDepthException, IOError)


class UsageErrorParser(argparse.ArgumentParser):
    """Exits 1 rather than argparse's 2 on bad arguments."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, '%s: error: %s\n' % (self.prog, message))


def _add_accuracy_args(parser):
    parser.add_argument('--epsilon', type=float, default=0.8,
                        help='Tolerance: estimates should fall within a '
                             'factor of 1 + epsilon.')
    parser.add_argument('--delta', type=float, default=0.2,
                        help='Allowed failure probability.')
    parser.add_argument('--seed', type=int, nargs='+', default=[0],
                        help='Master seed; several integers form a seed '
                             'path.')
    parser.add_argument('--interval', choices=INTERVAL_METHODS,
                        default=WILSON, dest='interval_method')
    parser.add_argument('--no-leapfrog', action='store_false',
                        dest='leapfrog',
                        help='Start every depth probe at 0.')
    parser.add_argument('--offset', type=int, default=5,
                        help='Leap-frog offset.')
    parser.add_argument('--budget', type=int, default=None,
                        help='Per-solve cap on decisions plus propagations.')
    parser.add_argument('--runs', type=int, default=None,
                        help='Fixed number of runs T (default: the T-table '
                             'value for epsilon and delta).')
    parser.add_argument('--pivot', type=int, default=None,
                        help='ApproxMC pivot (default ceil(9.84 (1 + '
                             '1/epsilon)**2)).')


def build_parser():
    parser = UsageErrorParser(
        prog='stacount',
        description='Approximate model counting with satisfiability '
                    'queries.')
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    count = commands.add_parser('count', help='Estimate one model count.')
    count.add_argument('instance',
                       help='DIMACS path, gen:n=..,m=..,seed=.. or '
                            'forced:n=..,k=..')
    count.add_argument('--algorithm', choices=ALGORITHMS, default=STAC_DSC)
    _add_accuracy_args(count)

    bench = commands.add_parser('bench',
                                help='Repeat counters over instances and '
                                     'report frequencies and query counts.')
    bench.add_argument('instances', nargs='+')
    bench.add_argument('--algorithms', nargs='+', choices=ALGORITHMS,
                       default=[STAC_DSC, APPROXMC])
    bench.add_argument('--repetitions', type=int, default=100)
    bench.add_argument('--workers', type=int, default=1)
    bench.add_argument('--format', choices=('json', 'csv'), default='json',
                       dest='output_format')
    bench.add_argument('-o', '--output', default=None,
                       help='Write the report here instead of stdout.')
    _add_accuracy_args(bench)

    gen = commands.add_parser('gen', help='Write a random 3-CNF instance.')
    gen.add_argument('--n', type=int, required=True)
    gen.add_argument('--m', type=int, required=True)
    gen.add_argument('--seed', type=int, default=0)
    gen.add_argument('-o', '--output', default=None)

    validate = commands.add_parser('validate',
                                   help='Check the unsat-probability model.')
    checks = validate.add_subparsers(dest='check', metavar='CHECK')
    checks.required = True
    limit = checks.add_parser('limit', help='Exact probabilities against '
                                            'their large-n limit, as CSV.')
    limit.add_argument('--n-grid', type=int, nargs='+',
                       default=[2, 3, 4, 6, 8, 10])
    limit.add_argument('--count', type=int, default=2)
    limit.add_argument('--d', type=int, default=1)
    limit.add_argument('--trials', type=int, default=None,
                       help='Also sample the idealized family this many '
                            'times for small n.')
    limit.add_argument('--seed', type=int, default=0)
    chain = checks.add_parser('chain', help='Empirical unsat frequency of '
                                            'XOR-hashed chains.')
    chain.add_argument('instance')
    chain.add_argument('--d', type=int, required=True)
    chain.add_argument('--chains', type=int, default=2000)
    chain.add_argument('--trials', type=int, default=None,
                       help='Also sample the idealized family this many '
                            'times.')
    chain.add_argument('--seed', type=int, default=0)

    table = commands.add_parser('table-t', help='Print the T-table.')
    table.add_argument('--grid', action='store_true',
                       help='Print the default (epsilon, delta) grid.')
    table.add_argument('--epsilon', type=float, nargs='+', default=None)
    table.add_argument('--delta', type=float, nargs='+', default=None)
    return parser


def _write(text, path, out):
    if path:
        with open(path, 'w') as f:
            f.write(text)
    else:
        out.write(text)


def _config(args, instances, algorithm, **extra):
    return ExperimentConfig(
        instances, algorithm=algorithm, epsilon=args.epsilon,
        delta=args.delta, seed=args.seed,
        interval_method=args.interval_method, leapfrog=args.leapfrog,
        offset=args.offset, budget=args.budget, runs=args.runs,
        pivot=args.pivot, **extra)


def do_count(args, out):
    cfg = _config(args, [args.instance], args.algorithm, repetitions=1)
    spec = cfg.instances[0]
    f = spec.load()
    outcome = run_repetition(f, cfg, cfg.seed)
    result = {
        'instance': spec.name,
        'algorithm': cfg.algorithm,
        'n': f.num_vars,
        'epsilon': cfg.epsilon,
        'delta': cfg.delta,
        'seed': list(cfg.seed),
        'estimate': outcome['estimate'],
        'runs_used': outcome['iterations'],
        'sat_queries': outcome['queries'],
    }
    if 'details' in outcome:
        result.update(outcome['details'])
    out.write(json.dumps(result, sort_keys=True) + '\n')


def do_bench(args, out):
    cfg = _config(args, args.instances, args.algorithms[0],
                  repetitions=args.repetitions, workers=args.workers,
                  output_format=args.output_format)
    reports, ratios = run_bench(cfg, args.algorithms)
    if args.output_format == 'csv':
        buf = io.StringIO()
        buf.write(','.join(CSV_COLUMNS) + '\n')
        for algorithm in args.algorithms:
            buf.write(reports[algorithm].to_csv().split('\n', 1)[1])
        text = buf.getvalue()
    else:
        text = json.dumps({
            'reports': dict((k, v.as_dict()) for k, v in reports.items()),
            'query_ratios': ratios,
        }, sort_keys=True, indent=2) + '\n'
    _write(text, args.output, out)


def do_gen(args, out):
    data = emit_dimacs(generate_random_3cnf(args.n, args.m, args.seed))
    if args.output:
        with open(args.output, 'wb') as f:
            f.write(data)
    else:
        out.write(data.decode('ascii'))


def do_validate(args, out):
    if args.check == 'limit':
        rows = compare_limit(args.n_grid, args.count, args.d,
                             trials=args.trials, seed=args.seed)
        write_limit_csv(rows, out)
        return
    f = InstanceSpec(args.instance).load()
    models = model_indices(f)
    result = {
        'instance': args.instance,
        'n': f.num_vars,
        'd': args.d,
        'count': len(models),
        'chains': args.chains,
        'predicted': q_of(args.d, len(models)),
        'observed': chain_unsat_frequency(f, args.d, args.chains,
                                          args.seed, models=models),
    }
    if args.trials and f.num_vars <= MAX_SAMPLED_VARS:
        result['idealized'] = sample_g_family_models(
            f.num_vars, models, args.d, args.trials, seed_path(args.seed))
    out.write(json.dumps(result, sort_keys=True) + '\n')


def do_table_t(args, out):
    epsilons = args.epsilon or DEFAULT_EPSILONS
    deltas = args.delta or DEFAULT_DELTAS
    if not (args.grid or args.epsilon or args.delta):
        epsilons, deltas = [0.8], [0.2]
    out.write('epsilon,delta,T\n')
    for epsilon, delta, T in t_table(epsilons, deltas):
        out.write('%s,%s,%s\n' % (epsilon, delta, T))


COMMANDS = {
    'count': do_count,
    'bench': do_bench,
    'gen': do_gen,
    'validate': do_validate,
    'table-t': do_table_t,
}


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    try:
        COMMANDS[args.command](args, out)
    except RUNTIME_ERRORS as e:
        logger.debug("%s failed: %r" % (args.command, e))
        errprint('stacount %s: %s' % (args.command, e))
        return 2
    return 0


if __name__ == '__main__':
    sys.exit(main())
