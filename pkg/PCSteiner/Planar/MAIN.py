# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

'''
Solver harness: configuration, solver plugins and algorithm dispatch
'''

import importlib.metadata
import importlib.util
import inspect
import os

from . import AppLogger, __version__
from .DP import PcstDynamicProgram
from .GRAPH import checkEmbedding, planarRotation, toJsonable
from .INSTANCE import TREE, evaluate, normalizeTerminals
from .PD import PrimalDualForest, certifiedRatio, checkInactiveDegrees, extractTree, replayEvents, runScaled, verifyDual
from .PIPELINE import PcsfReduction, PcstPipeline, PipelineConfig, ConfigError, solveBounded
from .STEINER import bruteForcePcsf
from .TD import heuristicDecomposition, makeNice, verifyDecomposition, verifyNice

PD = 'pd'
PD_SCALED = 'pd-scaled'
DP = 'dp'
PIPELINE = 'pipeline'
BRUTE = 'brute'

ALGORITHMS = (PD, PD_SCALED, DP, PIPELINE, BRUTE)
CHECKS = ('dual', 'decomposition', 'embedding', 'bounds')


class SolverMain:
    """ This class handles solver configuration, plugins and dispatch.

    :param config: A dictionary containing configuration data, every section optional:

    .. code-block:: text

        {
            "pipeline":{
                "epsilon":"1/2",
                "theta":4,
                "k":3,
                "solver":"exact-dp"
            },
            "logging":{
                "level":"off",
                "logDir":"."
            }
        }

    :type config: dict
    :param debug: Debug logging control, defaults to False
    :type debug: bool, optional
    :param loggingLevel: One of 'off', 'error' or 'full' to control file logging, defaults to 'off'
    :type loggingLevel: str, optional
    :param pluginDir: A string value containing a file path to a plugin directory, defaults to None
    :type pluginDir: str, optional
    """
    def __init__(self, config, debug=False, loggingLevel='off', pluginDir=None):
        self.configDict = config or {}
        self.debug = debug
        self.loggingLevel = loggingLevel
        self.pluginDir = pluginDir
        self.pluginsModuleList = []
        self.plugins = []
        self.lastDrawing = None
        self._parseConfig()
        self.logger = AppLogger.getLogger(__name__, self.debug, self.loggingLevel)

    def _parseConfig(self):
        """ Parse config when the harness is initialised """
        self.config = PipelineConfig.fromDict(self.configDict)
        if 'logging' in self.configDict:
            if self.configDict['logging'].get('debug'):
                self.debug = True
            if 'level' in self.configDict['logging']:
                self.loggingLevel = self.config.loggingLevel
            if 'logDir' in self.configDict['logging']:
                AppLogger.setLogDirectory(self.config.logDir)
        if self.pluginDir is None and self.config.pluginDir is not None:
            self.pluginDir = self.config.pluginDir
        self.config = self.config.withOverrides(debug=self.debug, loggingLevel=self.loggingLevel)

    def configure(self, **overrides):
        """ Applies command line overrides to the pipeline configuration.

        :raises ConfigError: When an override is invalid.
        """
        self.config = self.config.withOverrides(**overrides)
        self.logger.debug("Pipeline configuration {}".format(self.config.toDict()))

    def getModuleVersion(self):
        """ Returns a dictionary containing the package version.

        :return: A dictionary containing:

        .. code-block:: text

            {
                "moduleVersion":"0.3.0"
            }

        :rtype: dict

        """
        try:
            version = importlib.metadata.version('PCSteiner.Planar')
        except importlib.metadata.PackageNotFoundError:
            version = __version__
        return {"moduleVersion": version}

    def loadPlugins(self):
        """ Attempts to load and instantiate solver plugins from a specified folder. """
        if self.pluginDir is None:
            cwd = os.getcwd()
            self.pluginFullPath = os.path.join(cwd, "plugins")
            self.logger.debug("No plugin folder provided, using default")
            self.logger.debug("Current working directory: {}, plugins path: {}".format(cwd, self.pluginFullPath))
        else:
            self.pluginFullPath = self.pluginDir

        if not os.path.isdir(self.pluginFullPath):
            self.logger.info("Plugin folder {} does not exist, no plugins loaded".format(self.pluginFullPath))
            return self.plugins

        for filename in sorted(os.listdir(self.pluginFullPath)):
            modulename, extension = os.path.splitext(filename)
            if extension == '.py':
                path = os.path.join(self.pluginFullPath, filename)
                try:
                    self.logger.debug("Found plugin module: {}".format(path))
                    spec = importlib.util.spec_from_file_location(modulename, path)
                    module = importlib.util.module_from_spec(spec)
                    spec.loader.exec_module(module)
                    self.pluginsModuleList.append(module)
                except Exception as e:
                    self.logger.error("Could not load plugin {}, reason: {}".format(path, e))

        for pluginModule in self.pluginsModuleList:
            for name, obj in inspect.getmembers(pluginModule, inspect.isclass):
                if obj.__module__ != pluginModule.__name__ or not callable(getattr(obj, 'solve', None)):
                    continue
                try:
                    self.plugins.append(obj())
                    self.logger.debug("Created plugin class {}".format(name))
                except Exception as e:
                    self.logger.error("Could not create plugin {}, reason: {}".format(name, e))

        self.logger.info("Loaded {} plugin(s)".format(len(self.plugins)))
        return self.plugins

    def _primalDual(self, instance, scaled):
        encoded = normalizeTerminals(instance)
        if scaled:
            encodedSolution, dual = runScaled(encoded, self.config.epsilon, self.debug, self.loggingLevel)
            result = {'epsilon': self.config.epsilon}
        else:
            engine = PrimalDualForest(encoded, debug=self.debug, loggingLevel=self.loggingLevel)
            encodedSolution, dual, events = engine.run()
            result = {'dual': dual.toDict(), 'certifiedRatio': certifiedRatio(encodedSolution, dual),
                      'dualValue': dual.value(), 'events': len(events)}
        if instance.mode == TREE:
            edges = extractTree(instance, encoded, encodedSolution.edges)
        else:
            edges = [e for e in encodedSolution.edges if e < instance.graph.edgeCount]
        return evaluate(instance, edges), result

    def solve(self, instance, algorithm):
        """ Runs one algorithm on an instance.

        :param instance: The instance.
        :type instance: PcInstance
        :param algorithm: One of ``pd``, ``pd-scaled``, ``dp``, ``pipeline`` or ``brute``.
        :type algorithm: str
        :return: A dictionary containing:

        .. code-block:: text

            {
                "instance":"grid-0",
                "algorithm":"pipeline",
                "config":{...},
                "solution":{"edges":[0, 4], "length":"3", "penalty":"2", "cost":"5"},
                "result":{"ledger":{...}},
                "reports":{...},
                "passed":True
            }

        :rtype: dict

        """
        result = {}
        reports = {}
        if algorithm in (PD, PD_SCALED):
            solution, result = self._primalDual(instance, algorithm == PD_SCALED)
        elif algorithm == DP:
            if instance.mode != TREE:
                raise ConfigError("The exact program solves tree instances only")
            decomposition = heuristicDecomposition(instance.graph)
            program = PcstDynamicProgram(instance, makeNice(decomposition, instance.root), self.debug,
                                         self.loggingLevel)
            solution, cost = program.solve()
            result = {'width': decomposition.width, 'stats': program.stats(), 'tableCost': cost}
            reports['table'] = {'passed': cost == solution.cost}
        elif algorithm == PIPELINE:
            if instance.mode == TREE:
                pipeline = PcstPipeline(self.config, self.plugins)
                solution, ledger = pipeline.run(instance)
                reports.update(pipeline.reports)
                if pipeline.reduction is not None:
                    self.lastDrawing = (instance, pipeline.reduction.spanner)
            else:
                reduction = PcsfReduction(self.config)
                instances, recombiner = reduction.run(instance)
                solutions = [solveBounded(piece, self.config, self.plugins, self.logger) for piece in instances]
                solution, ledger = recombiner.recombine(solutions)
                reports['ledger'] = ledger.check(solution)
                if recombiner.reductions:
                    self.lastDrawing = (reduction.encoded, recombiner.reductions[0].spanner)
            result = {'ledger': ledger.toDict()}
        elif algorithm == BRUTE:
            solution, _ = bruteForcePcsf(instance, maxEdges=self.config.maxBruteForceEdges,
                                         maxPairs=self.config.maxBruteForcePairs)
        else:
            raise ConfigError("Unknown algorithm '{}', expected one of {}".format(algorithm, ', '.join(ALGORITHMS)))

        passed = _allPassed(reports)
        self.logger.info("Solved {} with {}: cost {}".format(instance.name or 'instance', algorithm, solution.cost))
        return toJsonable({'instance': instance.name, 'algorithm': algorithm, 'config': self.config.toDict(),
                          'solution': solution.toDict(), 'result': result, 'reports': reports, 'passed': passed})

    def verify(self, instance, check, decomposition=None):
        """ Runs one validator on an instance.

        :param check: One of ``dual``, ``decomposition``, ``embedding`` or ``bounds``.
        :type check: str
        :param decomposition: Decomposition to check instead of the heuristic one, defaults to None
        :type decomposition: TreeDecomposition, optional
        :rtype: dict
        """
        reports = {}
        if check == 'dual':
            encoded = normalizeTerminals(instance)
            engine = PrimalDualForest(encoded, checkInvariants=True, debug=self.debug, loggingLevel=self.loggingLevel)
            solution, dual, events = engine.run()
            reports['dual'] = verifyDual(dual, encoded)
            reports['chargeLedger'] = engine.checkChargeLedger()
            reports['conservation'] = {'passed': not engine.invariantViolations,
                                       'violations': engine.invariantViolations}
            offending = checkInactiveDegrees(encoded.graph, replayEvents(events), solution.edges)
            reports['degrees'] = {'passed': not offending, 'components': offending}
            reports['ratio'] = {'passed': solution.cost <= 4 * dual.value(), 'cost': solution.cost,
                                'bound': 4 * dual.value()}
        elif check == 'decomposition':
            if decomposition is None:
                decomposition = heuristicDecomposition(instance.graph)
            reports['decomposition'] = verifyDecomposition(instance.graph, decomposition)
            if reports['decomposition']['passed']:
                root = instance.root if instance.root is not None else 0
                reports['nice'] = verifyNice(makeNice(decomposition, root))
        elif check == 'embedding':
            rotation = instance.rotation if instance.rotation is not None else planarRotation(instance.graph)
            reports['embedding'] = checkEmbedding(instance.graph, rotation)
        elif check == 'bounds':
            if instance.mode == TREE:
                pipeline = PcstPipeline(self.config, self.plugins)
                pipeline.run(instance)
                reports.update(pipeline.reports)
            else:
                reduction = PcsfReduction(self.config)
                instances, recombiner = reduction.run(instance)
                for r in recombiner.reductions:
                    reports['spanner{}'.format(r.index)] = r.spanner.reports
                solutions = [solveBounded(piece, self.config, self.plugins, self.logger) for piece in instances]
                solution, ledger = recombiner.recombine(solutions)
                reports['ledger'] = ledger.check(solution)
        else:
            raise ConfigError("Unknown check '{}', expected one of {}".format(check, ', '.join(CHECKS)))
        passed = _allPassed(reports)
        if not passed:
            self.logger.error("Could not verify {} for {}, reason: a report failed".format(check, instance.name))
        return toJsonable({'instance': instance.name, 'check': check, 'reports': reports, 'passed': passed})


def _allPassed(reports):
    """ True when every nested report dictionary with a ``passed`` key passed. """
    for report in reports.values():
        if isinstance(report, dict):
            if 'passed' in report and not report['passed']:
                return False
            if 'passed' not in report and not _allPassed(report):
                return False
    return True
