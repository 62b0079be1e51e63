# Copyright 2026 The bnplogit Authors.
#
# Use of this source code is governed by a BSD-style
# license that can be found in the LICENSE file.
"""Command line interface to bnplogit.

Simulates choice data, fits nonparametric and Gaussian mixed logit models by
Gibbs sampling, scores fits against known truths and reruns the simulation
study.

Exit codes: 0 on success, 1 on usage errors, 2 on invalid data or
configuration, 3 on numerical failure.
"""

from __future__ import print_function

import argparse
import csv
import io
import json
import logging
import os
import sys

from .data_io import ReadDataset, ReadTrace, LoadStates, SaveStates, \
    WriteDataset, WriteDiagnostics, WriteMessage, WriteTrace
from .experiments import Evaluate, Reproduce, RunChains, SCALES, \
    EXPERIMENTS, Summarize
from .messages import ConfigError, FitSummary, ModelKind, RunConfig
from .model import InvalidInputError, NumericalError
from .random_variates import RngStream
from .result_cache import ResultCache
from .simulate import GeneratingMixture, SimulateNonpanel, SimulatePanel, \
    TruthFunction
from .trace import EmptyTraceError

from typing import List, Optional  # noqa: F401

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


class UsageError(Exception):
    """The command line is malformed."""
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError('{}: {}'.format(self.prog, message))


def GetLogger():
    return logging.getLogger('bnplogit')


def setup_logging(args):
    if args.loglevel:
        if args.loglevel == 'info':
            level = logging.INFO
        else:
            level = logging.DEBUG
        GetLogger().setLevel(level)
        logging.basicConfig()


def resolve_seed(args, default=0):
    if args.seed is not None:
        return args.seed
    env = os.environ.get('BNPLOGIT_SEED')
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(
                'BNPLOGIT_SEED must be an integer, got "{}"'.format(env))
    return default


def resolve_output_dir(args):
    directory = args.output_dir or os.environ.get('BNPLOGIT_OUTPUT_DIR') or '.'
    if not os.path.isdir(directory):
        os.makedirs(directory)
    return directory


def read_text(path):
    with io.open(path, 'r', encoding='utf-8', newline='') as f:
        return f.read()


def open_output(path):
    return io.open(path, 'w', encoding='utf-8', newline='')


def run_simulate(args):
    rng = RngStream(resolve_seed(args))
    if args.design == 'panel':
        dataset = SimulatePanel(args.n, args.periods, rng)
    else:
        dataset = SimulateNonpanel(args.n, rng)
    if args.output:
        with open_output(args.output) as f:
            WriteDataset(dataset, f)
    else:
        WriteDataset(dataset, sys.stdout)


def run_fit(args):
    cfg = RunConfig.FromJsonString(
        read_text(args.config) if args.config else '')
    overrides = {}
    if args.model:
        overrides['model'] = args.model
    seed = resolve_seed(args, cfg.seed)
    if seed != cfg.seed:
        overrides['seed'] = seed
    if overrides:
        cfg = cfg.Copy(**overrides)
    cfg.Validate()

    with io.open(args.data, 'r', encoding='utf-8', newline='') as f:
        dataset = ReadDataset(f)
    cfg.ValidateAgainst(dataset)

    traces = RunChains(dataset, cfg, args.chains, args.jobs)
    output_dir = resolve_output_dir(args)
    for c, trace in enumerate(traces):
        with open_output(os.path.join(output_dir,
                                      'trace_{}.csv'.format(c))) as f:
            WriteTrace(trace, f)
        with open_output(os.path.join(output_dir,
                                      'diagnostics_{}.csv'.format(c))) as f:
            WriteDiagnostics(trace, f)
        if cfg.store_states and trace.states:
            SaveStates(trace, os.path.join(output_dir,
                                           'states_{}.npz'.format(c)))

    truth = None
    if args.truth:
        truth = TruthFunction(GeneratingMixture.FromName(args.truth))
    summary = Summarize(traces, cfg, len(dataset), truth)
    with open_output(os.path.join(output_dir, 'summary.json')) as f:
        WriteMessage(summary, f)
    WriteMessage(summary, sys.stdout)


def run_evaluate(args):
    summary = FitSummary.FromJsonString(read_text(args.summary))
    points = [p.x for p in summary.points]
    if not points:
        raise EmptyTraceError('summary {} has no evaluated points'.format(
            args.summary))
    num_alternatives = args.alternatives or summary.num_alternatives
    dimension = args.dimension or summary.dimension
    if not num_alternatives or not dimension:
        raise ConfigError(
            'summary {} does not record num_alternatives and dimension; '
            'pass --alternatives and --dimension'.format(args.summary))
    cfg_shape = RunConfig(num_alternatives=num_alternatives,
                          dimension=dimension,
                          x_points=points)
    with io.open(args.trace, 'r', encoding='utf-8', newline='') as f:
        trace = ReadTrace(f, cfg_shape.Points(), summary.model)
    states = LoadStates(args.states, summary.model) if args.states else None
    report = Evaluate(summary, trace, GeneratingMixture.FromName(args.truth),
                      args.max_lag, states, args.grid)
    if args.output:
        with open_output(args.output) as f:
            WriteMessage(report, f)
    WriteMessage(report, sys.stdout)


def run_reproduce(args):
    cache = ResultCache(os.path.abspath(args.cache)) if args.cache else None
    result = Reproduce(args.experiment, args.scale, resolve_seed(args), cache,
                       args.jobs)
    output_dir = resolve_output_dir(args)
    with open_output(os.path.join(output_dir,
                                  result.name + '.csv')) as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(result.columns)
        writer.writerows(result.rows)
    with open_output(os.path.join(output_dir,
                                  result.name + '.json')) as f:
        json.dump(
            {
                'experiment': result.name,
                'scale': args.scale,
                'columns': result.columns,
                'rows': result.rows,
                'details': result.details
            },
            f,
            indent=2,
            sort_keys=True)
        f.write('\n')
    print(os.path.join(output_dir, result.name + '.csv'))


def BuildParser():
    parser = _Parser(prog='bnplogit', description=__doc__)
    subcommands = parser.add_subparsers(dest='command', help='Subcommands')

    common_args = _Parser(description='Common options', add_help=False)
    common_args.add_argument('--loglevel',
                             '-l',
                             help='Log level',
                             choices=['info', 'debug'])
    common_args.add_argument(
        '--seed',
        type=int,
        help='Random seed. Defaults to $BNPLOGIT_SEED, then the configured '
        'seed.')

    output_args = _Parser(add_help=False)
    output_args.add_argument(
        '--output-dir',
        '-o',
        help='Output directory. Defaults to $BNPLOGIT_OUTPUT_DIR, then the '
        'current directory.')

    # simulate
    simulate_command = subcommands.add_parser('simulate',
                                              help='Simulate a dataset',
                                              parents=[common_args])
    simulate_command.add_argument('--design',
                                  choices=['nonpanel', 'panel'],
                                  default='nonpanel')
    simulate_command.add_argument('--n',
                                  type=int,
                                  required=True,
                                  help='Number of individuals')
    simulate_command.add_argument('--periods',
                                  '-T',
                                  type=int,
                                  default=10,
                                  help='Choices per individual (panel only)')
    simulate_command.add_argument('--output',
                                  help='CSV file to write. Defaults to '
                                  'standard output.')
    simulate_command.set_defaults(func=run_simulate)

    # fit
    fit_command = subcommands.add_parser('fit',
                                         help='Fit a model to a dataset',
                                         parents=[common_args, output_args])
    fit_command.add_argument('--data', required=True, help='Dataset CSV')
    fit_command.add_argument('--config', help='Run configuration JSON')
    fit_command.add_argument('--model',
                             choices=ModelKind.Values(),
                             help='Overrides the configured model')
    fit_command.add_argument('--chains', type=int, default=1)
    fit_command.add_argument('--jobs',
                             type=int,
                             default=1,
                             help='Chains to run concurrently')
    fit_command.add_argument(
        '--truth',
        choices=['two-point', 'two-normal', 'point-mass'],
        help='Generating mixture; adds true values and RMS to the summary')
    fit_command.set_defaults(func=run_fit)

    # evaluate
    evaluate_command = subcommands.add_parser(
        'evaluate',
        help='Score a fitted trace against a known truth',
        parents=[common_args])
    evaluate_command.add_argument('--summary',
                                  required=True,
                                  help='summary.json written by fit')
    evaluate_command.add_argument('--trace',
                                  required=True,
                                  help='trace CSV written by fit')
    evaluate_command.add_argument(
        '--truth',
        required=True,
        choices=['two-point', 'two-normal', 'point-mass'])
    evaluate_command.add_argument('--states',
                                  help='states .npz for the grid L1 error')
    evaluate_command.add_argument('--grid',
                                  type=int,
                                  default=3,
                                  help='Grid points per axis')
    evaluate_command.add_argument('--max-lag', type=int, default=50)
    evaluate_command.add_argument('--alternatives', type=int)
    evaluate_command.add_argument('--dimension', type=int)
    evaluate_command.add_argument('--output', help='Report JSON to write')
    evaluate_command.set_defaults(func=run_evaluate)

    # reproduce
    reproduce_command = subcommands.add_parser(
        'reproduce',
        help='Rerun a simulation-study experiment',
        parents=[common_args, output_args])
    reproduce_command.add_argument('experiment',
                                   choices=sorted(EXPERIMENTS))
    reproduce_command.add_argument('--scale',
                                   choices=sorted(SCALES),
                                   default='desk')
    reproduce_command.add_argument('--cache',
                                   '-C',
                                   help='Cache directory for finished cells')
    reproduce_command.add_argument('--jobs', type=int, default=1)
    reproduce_command.set_defaults(func=run_reproduce)

    return parser


def Main(argv=None):
    # type: (Optional[List[str]]) -> int
    try:
        arguments = BuildParser().parse_args(argv)
        if not getattr(arguments, 'func', None):
            raise UsageError('bnplogit: a subcommand is required')
        setup_logging(arguments)
        arguments.func(arguments)
        return EXIT_OK
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except (InvalidInputError, EmptyTraceError, IOError) as e:
        print('error: {}'.format(e), file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as e:
        print('numerical failure: {}'.format(e), file=sys.stderr)
        return EXIT_NUMERICAL
