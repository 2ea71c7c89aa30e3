# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

'''
End-to-end pipelines

The tree pipeline runs the scaled primal-dual algorithm, builds a spanner around
the resulting tree, contracts the lightest BFS level class and solves the
bounded-treewidth remainder exactly. The forest pipeline clusters the scaled
forest, splits the instance into independent pieces and reduces each to a
contracted instance that an external solver can handle; a recombiner lifts and
merges their solutions. Both keep an itemized cost ledger whose total is the
cost of the returned forest.
'''

import dataclasses
import json
import logging
from fractions import Fraction

import toml

from . import AppLogger, PCSteinerError
from .CLUSTER import contractForest, prune, runClustering, splitInstances
from .DP import bellNumber, solvePcst
from .GRAPH import EmbeddingError, checkEmbedding, connectivity, formatRational, planarRotation, spanningForest, toRational
from .INSTANCE import FOREST, TREE, baseEdges, evaluate, normalizeTerminals
from .PD import extractTree, runScaled
from .SPANNER import BudgetExceededError, buildSpanner, restrictInstance
from .STEINER import bruteForcePcsf, bruteForcePcst
from .TD import contractEdges, heuristicDecomposition, makeNice, partitionEdges

logger = logging.getLogger(__name__)

EXACT_DP = 'exact-dp'
BRUTE_FORCE = 'brute-force'
PLUGIN_PREFIX = 'plugin:'


class ConfigError(PCSteinerError):
    """ Raised for invalid pipeline configuration. """


class PipelineError(PCSteinerError):
    """ Raised when a pipeline stage cannot produce a usable result. """


@dataclasses.dataclass(frozen=True)
class PipelineConfig:
    """ Pipeline parameters and budgets.

    :param epsilon: Accuracy parameter in ``(0, 1]``.
    :type epsilon: Fraction
    :param theta: Portals per brick, at least 1.
    :type theta: int
    :param k: Number of BFS level classes, at least 2.
    :type k: int
    :param solver: ``'exact-dp'``, ``'brute-force'`` or ``'plugin:<ClassName>'``.
    :type solver: str
    """
    epsilon: Fraction = Fraction(1, 2)
    theta: int = 4
    k: int = 3
    solver: str = EXACT_DP
    seed: int = 0
    maxTheta: int = 8
    maxWidth: int = 6
    maxDreyfusWagnerTerminals: int = 10
    maxBruteForceEdges: int = 16
    maxBruteForcePairs: int = 6
    debug: bool = False
    loggingLevel: str = 'off'
    logDir: str = '.'
    pluginDir: str = None

    def __post_init__(self):
        try:
            object.__setattr__(self, 'epsilon', toRational(self.epsilon))
        except Exception as e:
            raise ConfigError("Could not read epsilon '{}', reason: {}".format(self.epsilon, e))
        if not (0 < self.epsilon <= 1):
            raise ConfigError("Epsilon must lie in (0, 1], got {}".format(self.epsilon))
        for name in ('theta', 'k', 'seed', 'maxTheta', 'maxWidth', 'maxDreyfusWagnerTerminals',
                     'maxBruteForceEdges', 'maxBruteForcePairs'):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise ConfigError("{} must be an integer, got {}".format(name, value))
            object.__setattr__(self, name, int(value))
        if self.theta < 1:
            raise ConfigError("Theta must be at least 1, got {}".format(self.theta))
        if self.k < 2:
            raise ConfigError("k must be at least 2, got {}".format(self.k))
        if self.solver not in (EXACT_DP, BRUTE_FORCE) and not self.solver.startswith(PLUGIN_PREFIX):
            raise ConfigError("Unknown solver '{}', expected {}, {} or {}<ClassName>".format(
                self.solver, EXACT_DP, BRUTE_FORCE, PLUGIN_PREFIX))
        if self.loggingLevel not in ('off', 'error', 'full'):
            raise ConfigError("Unknown logging level '{}'".format(self.loggingLevel))

    @classmethod
    def fromDict(cls, config):
        """ Builds a configuration from a parsed TOML dictionary.

        .. code-block:: text

            {
                "pipeline":{"epsilon":"1/2", "theta":4, "k":3, "solver":"exact-dp", "seed":0},
                "budget":{"maxTheta":8, "maxWidth":6, "maxDreyfusWagnerTerminals":10,
                          "maxBruteForceEdges":16, "maxBruteForcePairs":6},
                "logging":{"debug":False, "level":"off", "logDir":"."},
                "plugins":{"dir":"plugins"}
            }

        :param config: Configuration dictionary, every section is optional.
        :type config: dict
        :raises ConfigError: On unknown keys or invalid values.
        :rtype: PipelineConfig
        """
        known = {
            'pipeline': {'epsilon': 'epsilon', 'theta': 'theta', 'k': 'k', 'solver': 'solver', 'seed': 'seed'},
            'budget': {'maxTheta': 'maxTheta', 'maxWidth': 'maxWidth',
                       'maxDreyfusWagnerTerminals': 'maxDreyfusWagnerTerminals',
                       'maxBruteForceEdges': 'maxBruteForceEdges', 'maxBruteForcePairs': 'maxBruteForcePairs'},
            'logging': {'debug': 'debug', 'level': 'loggingLevel', 'logDir': 'logDir'},
            'plugins': {'dir': 'pluginDir'},
        }
        values = {}
        for section, content in (config or {}).items():
            if section not in known:
                raise ConfigError("Unknown configuration section [{}]".format(section))
            if not isinstance(content, dict):
                raise ConfigError("Section [{}] must be a table".format(section))
            for key, value in content.items():
                if key not in known[section]:
                    raise ConfigError("Unknown key '{}' in section [{}]".format(key, section))
                values[known[section][key]] = value
        return cls(**values)

    @classmethod
    def fromToml(cls, path):
        try:
            config = toml.load(path)
        except (OSError, toml.TomlDecodeError) as e:
            raise ConfigError("Could not load configuration {}, reason: {}".format(path, e))
        return cls.fromDict(config)

    def withOverrides(self, **overrides):
        """ Copy with every override that is not ``None`` applied. """
        return dataclasses.replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def toDict(self):
        return {
            'pipeline': {'epsilon': formatRational(self.epsilon), 'theta': self.theta, 'k': self.k,
                         'solver': self.solver, 'seed': self.seed},
            'budget': {'maxTheta': self.maxTheta, 'maxWidth': self.maxWidth,
                       'maxDreyfusWagnerTerminals': self.maxDreyfusWagnerTerminals,
                       'maxBruteForceEdges': self.maxBruteForceEdges, 'maxBruteForcePairs': self.maxBruteForcePairs},
        }


UNCONDITIONAL = 'unconditional'
COMPONENT = 'component'
REEXPANSION = 're-expansion'
SHARED_EDGE = 'shared-edge'
CROSS_COMPONENT = 'cross-component'


class CostLedger:
    """ Itemized exact accounting of a pipeline result. """
    def __init__(self):
        self.items = []

    def add(self, kind, value, label=None):
        self.items.append((kind, label, toRational(value)))

    @property
    def total(self):
        return sum((value for _, _, value in self.items), Fraction(0))

    def byKind(self):
        totals = {}
        for kind, _, value in self.items:
            totals[kind] = totals.get(kind, Fraction(0)) + value
        return totals

    def check(self, solution):
        """ Compares the ledger total with the evaluated cost of ``solution``. """
        return {'passed': self.total == solution.cost, 'total': self.total, 'cost': solution.cost}

    def toDict(self):
        """ Returns the ledger items and totals.

        .. code-block:: text

            {
                "items":[{"kind":"component", "label":"0", "value":"7/2"}],
                "byKind":{"component":"7/2"},
                "total":"7/2"
            }

        :rtype: dict

        """
        return {'items': [{'kind': kind, 'label': label, 'value': formatRational(value)}
                          for kind, label, value in self.items],
                'byKind': {kind: formatRational(value) for kind, value in self.byKind().items()},
                'total': formatRational(self.total)}

    def toJson(self):
        return json.dumps(self.toDict(), indent=2)


def ensureRotation(instance):
    """ The instance with a checked planar embedding.

    :raises EmbeddingError: When the graph is not planar or the given rotation is inconsistent.
    :rtype: PcInstance
    """
    if instance.rotation is None:
        return dataclasses.replace(instance, rotation=planarRotation(instance.graph))
    report = checkEmbedding(instance.graph, instance.rotation)
    if not report['passed']:
        raise EmbeddingError("Rotation system is not a planar embedding: {}".format(report['violations']))
    return instance


def resolvePlugin(solver, plugins):
    name = solver[len(PLUGIN_PREFIX):]
    for plugin in plugins or ():
        if plugin.__class__.__name__ == name:
            return plugin
    raise PipelineError("Solver plugin '{}' is not loaded".format(name))


def solveBounded(instance, config, plugins=None, log=logger):
    """ Solves a contracted instance with the configured bounded-treewidth solver.

    :return: Edge ids of the solution.
    :rtype: tuple
    :raises BudgetExceededError: When the decomposition is wider than ``maxWidth``.
    :raises PipelineError: When a plugin is missing or returns an invalid edge set.
    """
    solver = config.solver
    if solver == EXACT_DP and instance.mode == FOREST:
        log.warning("Exact program is for tree instances, using brute force on the forest instance")
        solver = BRUTE_FORCE
    if solver == EXACT_DP:
        decomposition = heuristicDecomposition(instance.graph)
        if decomposition.width > config.maxWidth:
            estimate = len(decomposition.bags) * bellNumber(decomposition.width + 1)
            raise BudgetExceededError("Decomposition width {} exceeds the budget {}".format(
                decomposition.width, config.maxWidth), estimate)
        nice = makeNice(decomposition, instance.root)
        tree, _ = solvePcst(instance, nice, config.debug, config.loggingLevel)
        return tree.edges
    if solver == BRUTE_FORCE:
        if instance.mode == TREE:
            solution, _ = bruteForcePcst(instance, maxTerminals=config.maxDreyfusWagnerTerminals)
        else:
            solution, _ = bruteForcePcsf(instance, maxEdges=config.maxBruteForceEdges,
                                         maxPairs=config.maxBruteForcePairs)
        return solution.edges
    plugin = resolvePlugin(solver, plugins)
    edges = tuple(sorted(set(int(e) for e in plugin.solve(instance))))
    if any(not (0 <= e < instance.graph.edgeCount) for e in edges):
        raise PipelineError("Plugin {} returned edge ids outside the instance".format(plugin.__class__.__name__))
    return edges


@dataclasses.dataclass
class Reduction:
    """ One contracted bounded-treewidth instance and the maps back to the input. """
    index: int
    instance: object
    contraction: object
    originalIds: tuple
    spanner: object
    pairIds: tuple = ()

    def lift(self, edgeIds, treeMode):
        """ Input-graph edge ids of a solution of the contracted instance. """
        lifted = self.contraction.lift(edgeIds, treeMode)
        return tuple(sorted(self.originalIds[e] for e in lifted))


def _reduce(working, treeEdges, terminals, config, index, log):
    spanner = buildSpanner(working, treeEdges, config.epsilon, config.theta, terminals, config.maxTheta,
                           config.maxDreyfusWagnerTerminals, config.debug, config.loggingLevel)
    restricted, originalIds = restrictInstance(working, spanner.edges)
    partition = partitionEdges(restricted.graph, config.k, working.root)
    bound = spanner.length / config.k
    if partition.lengths[partition.selected] > bound:
        raise PipelineError("Contracted class has length {}, above Length(H)/k = {}".format(
            partition.lengths[partition.selected], bound))
    contraction = contractEdges(restricted.graph, partition.selectedEdges, restricted)
    log.debug("Reduction {}: spanner {} edges, contracted {} edges, {} vertices left".format(
        index, len(spanner.edges), len(partition.selectedEdges), contraction.graph.n))
    return Reduction(index, contraction.instance, contraction, originalIds, spanner)


class PcstPipeline:
    """ Prize-collecting Steiner tree pipeline on a planar instance.

    :param config: Pipeline configuration.
    :type config: PipelineConfig
    :param plugins: Loaded solver plugins, defaults to None
    :type plugins: list, optional
    """
    def __init__(self, config, plugins=None):
        self.logger = AppLogger.getLogger(__name__, config.debug, config.loggingLevel)
        self.config = config
        self.plugins = plugins
        self.tree = None
        self.reduction = None
        self.reports = {}

    def run(self, instance):
        """ Runs every stage.

        :param instance: Tree instance.
        :type instance: PcInstance
        :raises ValidationError: When the instance is not a tree instance.
        :raises EmbeddingError: When it is not planar.
        :raises BudgetExceededError: When theta or the decomposition width are beyond budget.
        :raises PipelineError: When the contracted class is longer than the spanner length over ``k``.
        :return: ``(solution, ledger)``
        :rtype: tuple
        """
        if instance.mode != TREE:
            raise PipelineError("The tree pipeline needs a rooted tree instance")
        config = self.config
        instance = ensureRotation(instance)
        encoded = normalizeTerminals(instance)
        scaled, _ = runScaled(encoded, config.epsilon, config.debug, config.loggingLevel)
        self.tree = extractTree(instance, encoded, scaled.edges)
        graph = instance.graph

        ledger = CostLedger()
        if not self.tree:
            self.logger.info("Scaled forest leaves the root alone, returning the root")
            solution = evaluate(instance, ())
            ledger.add(UNCONDITIONAL, solution.penalty)
            self.reports['ledger'] = ledger.check(solution)
            return solution, ledger

        onTree = set(x for e in self.tree for x in graph.endpoints(e))
        penalties = tuple(p if (v in onTree or v == instance.root) else Fraction(0)
                          for v, p in enumerate(instance.vertexPenalties))
        working = dataclasses.replace(instance, vertexPenalties=penalties)
        terminals = working.terminals() + (instance.root,)
        self.reduction = _reduce(working, self.tree, terminals, config, 0, self.logger)
        self.reports['spanner'] = self.reduction.spanner.reports

        contracted = self.reduction.instance
        solved = solveBounded(contracted, config, self.plugins, self.logger)
        component = evaluate(contracted, solved)
        lifted = self.reduction.lift(solved, True)
        solution = evaluate(instance, lifted)

        uf = connectivity(graph, lifted)
        uncollected = sum((p for v, p in enumerate(instance.vertexPenalties)
                           if v not in onTree and uf[v] != uf[instance.root]), Fraction(0))
        ledger.add(UNCONDITIONAL, uncollected)
        ledger.add(COMPONENT, component.cost, '0')
        ledger.add(REEXPANSION, graph.totalLength(lifted) - component.length, '0')
        self.reports['ledger'] = ledger.check(solution)
        self.reports['feasible'] = {'passed': _isRootedTree(graph, lifted, instance.root)}
        for name in ('ledger', 'feasible'):
            if not self.reports[name]['passed']:
                self.logger.error("Could not validate {}, reason: {}".format(name, self.reports[name]))
        self.logger.info("Tree pipeline cost {} (tree {} edges, spanner {} edges, solution {} edges)".format(
            solution.cost, len(self.tree), len(self.reduction.spanner.edges), len(solution.edges)))
        return solution, ledger


def _isRootedTree(graph, edges, root):
    if len(spanningForest(graph, edges)) != len(edges):
        return False
    uf = connectivity(graph, edges)
    return all(uf[x] == uf[root] for e in edges for x in graph.endpoints(e))


def ptasPcst(instance, config, plugins=None):
    """ Runs :class:`PcstPipeline`.

    :return: ``(solution, ledger)``
    :rtype: tuple
    """
    return PcstPipeline(config, plugins).run(instance)


class Recombiner:
    """ Lifts solutions of the reduced instances back onto the input and merges them.

    :param instance: The input forest instance.
    :type instance: PcInstance
    :param reductions: One reduction per piece of the split.
    :type reductions: list
    :param straddling: Ids of pairs separated by the split.
    :type straddling: list
    """
    def __init__(self, instance, encoded, reductions, straddling):
        self.instance = instance
        self.encoded = encoded
        self.reductions = reductions
        self.straddling = tuple(straddling)

    def recombine(self, solutions):
        """ Merges one edge list per reduced instance.

        :param solutions: Edge ids per reduced instance, in reduction order.
        :type solutions: list
        :raises PipelineError: When the solution count does not match.
        :return: ``(solution, ledger)``
        :rtype: tuple
        """
        if len(solutions) != len(self.reductions):
            raise PipelineError("Expected {} solutions, got {}".format(len(self.reductions), len(solutions)))
        graph = self.instance.graph
        ledger = CostLedger()
        union = set()
        liftedLength = Fraction(0)
        ownPenalty = Fraction(0)
        for reduction, edges in zip(self.reductions, solutions):
            component = evaluate(reduction.instance, edges)
            lifted = reduction.lift(edges, False)
            ledger.add(COMPONENT, component.cost, str(reduction.index))
            lengthLifted = self.encoded.graph.totalLength(lifted)
            ledger.add(REEXPANSION, lengthLifted - component.length, str(reduction.index))
            liftedLength += lengthLifted
            ownPenalty += component.penalty
            union.update(lifted)

        final = tuple(sorted(spanningForest(graph, baseEdges(self.encoded, union))))
        solution = evaluate(self.instance, final)
        ledger.add(SHARED_EDGE, solution.length - liftedLength)
        uf = connectivity(graph, final)
        separated = [i for i, pair in enumerate(self.instance.pairs) if pair.penalty > 0 and uf[pair.s] != uf[pair.t]]
        straddling = set(self.straddling)
        inPieces = sum((self.instance.pairs[i].penalty for i in separated if i not in straddling), Fraction(0))
        ledger.add(CROSS_COMPONENT, inPieces - ownPenalty)
        ledger.add(UNCONDITIONAL, sum((self.instance.pairs[i].penalty for i in separated if i in straddling),
                                      Fraction(0)))
        return solution, ledger


class PcsfReduction:
    """ Reduces a planar forest instance to contracted bounded-treewidth instances.

    :param config: Pipeline configuration.
    :type config: PipelineConfig
    """
    def __init__(self, config):
        self.logger = AppLogger.getLogger(__name__, config.debug, config.loggingLevel)
        self.config = config
        self.encoded = None
        self.scaled = None
        self.clustering = None
        self.pieces = []
        self.straddling = []

    def run(self, instance):
        """ Runs the reduction.

        :param instance: Forest instance.
        :type instance: PcInstance
        :return: ``(instances, recombiner)``
        :rtype: tuple
        """
        if instance.mode != FOREST:
            raise PipelineError("The forest reduction needs a forest instance")
        config = self.config
        instance = ensureRotation(instance)
        self.encoded = normalizeTerminals(instance)
        self.scaled, _ = runScaled(self.encoded, config.epsilon, config.debug, config.loggingLevel)
        contracted = contractForest(self.encoded.graph, self.scaled.edges, config.epsilon)
        self.clustering = runClustering(contracted, config.debug, config.loggingLevel)
        prune(self.clustering)
        self.pieces, self.straddling = splitInstances(self.encoded, self.clustering)

        reductions = []
        for piece in self.pieces:
            terminals = piece.instance.terminals()
            reduction = _reduce(piece.instance, piece.treeEdges, terminals, config, piece.index, self.logger)
            reduction.pairIds = piece.pairIds
            reductions.append(reduction)
        self.logger.info("Forest reduction: {} pieces, {} straddling pairs".format(
            len(reductions), len(self.straddling)))
        return [r.instance for r in reductions], Recombiner(instance, self.encoded, reductions, self.straddling)


def reducePcsf(instance, config):
    """ Runs :class:`PcsfReduction`.

    :return: ``(instances, recombiner)``
    :rtype: tuple
    """
    return PcsfReduction(config).run(instance)


def solvePcsf(instance, config, plugins=None):
    """ Reduces a forest instance, solves every piece with the configured solver and recombines.

    :return: ``(solution, ledger)``
    :rtype: tuple
    """
    instances, recombiner = reducePcsf(instance, config)
    solutions = [solveBounded(piece, config, plugins) for piece in instances]
    return recombiner.recombine(solutions)


def checkSplit(instance, config):
    """ Compares the optima of the split pieces, plus the straddling penalties,
    with ``(1 + epsilon)`` times the optimum of the whole instance.

    :return: A dictionary containing:

    .. code-block:: text

        {
            "passed":True,
            "pieces":"9",
            "straddling":"2",
            "optimum":"10",
            "bound":"15",
            "ratio":"11/10"
        }

    :rtype: dict

    """
    reduction = PcsfReduction(config)
    reduction.run(instance)
    budget = {'maxEdges': config.maxBruteForceEdges, 'maxPairs': config.maxBruteForcePairs}
    pieces = sum((bruteForcePcsf(piece.instance, **budget)[1] for piece in reduction.pieces), Fraction(0))
    straddling = sum((reduction.encoded.pairs[i].penalty for i in reduction.straddling), Fraction(0))
    _, optimum = bruteForcePcsf(reduction.encoded, **budget)
    bound = (1 + config.epsilon) * optimum
    ratio = (pieces + straddling) / optimum if optimum else None
    return {'passed': pieces + straddling <= bound, 'pieces': pieces, 'straddling': straddling,
            'optimum': optimum, 'bound': bound, 'ratio': ratio}
