# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

'''
Command line front end

``pcsteiner solve``, ``verify``, ``gen`` and ``bench``. The exit status is 0
when every report passed, 1 when a report or a budget failed and 2 on usage
errors, unreadable input or invalid configuration.
'''

import argparse
import json
import sys

import toml

from . import AppLogger, PCSteinerError
from .BENCH import SUITES, SuiteRunner
from .CLUSTER import CyclicForestError
from .FORMATS import ParseError, readInstance, readTd, writeInstance
from .GEN import KINDS, generate
from .GRAPH import EmbeddingError, ValidationError
from .INSTANCE import FOREST, TREE, NotNormalizedError
from .MAIN import ALGORITHMS, CHECKS, SolverMain
from .PIPELINE import ConfigError, PipelineConfig
from .TD import DecompositionError

INSTANCE_FORMATS = ('json', 'stp-ext')

EXIT_PASSED = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

_usageErrors = (ParseError, ValidationError, ConfigError, EmbeddingError, NotNormalizedError, DecompositionError,
                CyclicForestError, OSError, toml.TomlDecodeError)


def _addCommon(parser):
    parser.add_argument('--config', help="TOML configuration file")
    parser.add_argument('--debug', action='store_true', help="Log debug messages to the console")
    parser.add_argument('--logging-level', choices=('off', 'error', 'full'), default=None,
                        help="File logging, defaults to the configuration value")


def _addPipeline(parser):
    parser.add_argument('--epsilon', help="Accuracy parameter in (0, 1], e.g. 1/2")
    parser.add_argument('--theta', type=int, help="Portals per brick")
    parser.add_argument('--k', type=int, help="Number of BFS level classes")
    parser.add_argument('--solver', help="exact-dp, brute-force or plugin:<ClassName>")
    parser.add_argument('--plugins', help="Directory of solver plugins")


def buildParser():
    parser = argparse.ArgumentParser(prog='pcsteiner',
                                     description="Prize-collecting Steiner trees and forests in planar graphs")
    commands = parser.add_subparsers(dest='command', required=True)

    solve = commands.add_parser('solve', help="Solve an instance")
    solve.add_argument('--alg', required=True, choices=ALGORITHMS)
    solve.add_argument('--input', required=True, help="Instance file (.json or .stp)")
    solve.add_argument('--format', choices=INSTANCE_FORMATS, help="Input format, defaults to the file extension")
    solve.add_argument('--output', help="Report file, defaults to standard output")
    solve.add_argument('--svg', help="Draw the spanner stages of a pipeline run into this file")
    _addPipeline(solve)
    _addCommon(solve)

    verify = commands.add_parser('verify', help="Run a validator on an instance")
    verify.add_argument('check', choices=CHECKS)
    verify.add_argument('--input', required=True, help="Instance file (.json or .stp)")
    verify.add_argument('--format', choices=INSTANCE_FORMATS, help="Input format, defaults to the file extension")
    verify.add_argument('--td', help="Tree decomposition (.td) to check instead of the heuristic one")
    verify.add_argument('--output', help="Report file, defaults to standard output")
    _addPipeline(verify)
    _addCommon(verify)

    gen = commands.add_parser('gen', help="Generate a planar instance")
    gen.add_argument('--kind', required=True, choices=KINDS)
    gen.add_argument('--seed', type=int, default=0)
    gen.add_argument('--mode', choices=(FOREST, TREE), default=FOREST)
    gen.add_argument('--pairs', type=int, default=3)
    gen.add_argument('--terminals', type=int, default=3)
    gen.add_argument('--rows', type=int)
    gen.add_argument('--cols', type=int)
    gen.add_argument('--points', type=int)
    gen.add_argument('--steps', type=int)
    gen.add_argument('--size', type=int)
    gen.add_argument('--chords', type=int)
    gen.add_argument('--out', required=True, help="Instance file (.json or .stp)")
    gen.add_argument('--debug', action='store_true')

    bench = commands.add_parser('bench', help="Run benchmark suites")
    bench.add_argument('--suite', action='append', default=[], choices=SUITES + ('all',),
                       help="Suite to run, repeatable")
    bench.add_argument('--out', required=True, help="Report directory")
    bench.add_argument('--count', type=int, help="Instances per suite, defaults to the acceptance counts")
    bench.add_argument('--workers', type=int, default=1)
    bench.add_argument('--seed', type=int)
    _addCommon(bench)
    return parser


def _loadConfig(args):
    if args.config is None:
        return {}
    return toml.load(args.config)


def _harness(args):
    harness = SolverMain(_loadConfig(args), debug=args.debug, loggingLevel=args.logging_level or 'off',
                         pluginDir=args.plugins)
    harness.configure(epsilon=args.epsilon, theta=args.theta, k=args.k, solver=args.solver)
    if harness.config.solver.startswith('plugin:') or args.plugins is not None:
        harness.loadPlugins()
    return harness


def _emit(report, path):
    text = json.dumps(report, indent=2, sort_keys=True)
    if path is None:
        print(text)
    else:
        with open(path, 'w') as handle:
            handle.write(text + '\n')


def runSolve(args, logger):
    harness = _harness(args)
    instance = readInstance(args.input, args.format)
    report = harness.solve(instance, args.alg)
    _emit(report, args.output)
    if args.svg:
        if harness.lastDrawing is None:
            logger.warning("No spanner was built, {} not written".format(args.svg))
        else:
            from .DRAW import drawStages
            drawStages(harness.lastDrawing[0], harness.lastDrawing[1], args.svg)
    return report['passed']


def runVerify(args, logger):
    harness = _harness(args)
    instance = readInstance(args.input, args.format)
    decomposition = None
    if args.td:
        with open(args.td) as handle:
            decomposition, vertexCount = readTd(handle.read())
        if vertexCount != instance.graph.n:
            raise ValidationError("Decomposition covers {} vertices, the instance has {}".format(
                vertexCount, instance.graph.n))
    report = harness.verify(instance, args.check, decomposition)
    _emit(report, args.output)
    return report['passed']


def runGen(args, logger):
    params = {name: getattr(args, name) for name in ('rows', 'cols', 'points', 'steps', 'size', 'chords')
              if getattr(args, name) is not None}
    instance = generate(args.kind, seed=args.seed, mode=args.mode, pairs=args.pairs, terminals=args.terminals,
                        **params)
    writeInstance(instance, args.out)
    logger.info("Wrote {} to {}".format(instance.name, args.out))
    return True


def runBench(args, logger):
    config = PipelineConfig.fromDict(_loadConfig(args)).withOverrides(seed=args.seed)
    suites = list(SUITES) if 'all' in args.suite else list(dict.fromkeys(args.suite))
    runner = SuiteRunner(config, args.out, count=args.count, workers=args.workers, debug=args.debug,
                         loggingLevel=args.logging_level or 'off')
    report = runner.run(suites)
    return report['passed']


_commands = {'solve': runSolve, 'verify': runVerify, 'gen': runGen, 'bench': runBench}


def main(argv=None):
    """ Console entry point.

    :param argv: Arguments without the program name, defaults to ``sys.argv[1:]``
    :type argv: list, optional
    :return: Exit status.
    :rtype: int
    """
    args = buildParser().parse_args(argv)
    logger = AppLogger.getLogger(__name__, args.debug)
    try:
        passed = _commands[args.command](args, logger)
    except _usageErrors as e:
        logger.error("Could not run {}, reason: {}".format(args.command, e))
        return EXIT_USAGE
    except PCSteinerError as e:
        logger.error("Could not complete {}, reason: {}".format(args.command, e))
        return EXIT_FAILED
    return EXIT_PASSED if passed else EXIT_FAILED


if __name__ == '__main__':
    sys.exit(main())
