# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

'''
Prize-collecting clustering

The trees of a scaled primal-dual forest are contracted to supervertices that
carry ``Length(T)/epsilon`` potential each. Moats grow around them without pair
bookkeeping, the tight forest is pruned, and the surviving trees split the
instance into independent sub-instances.
'''

import dataclasses
import json
import logging
from fractions import Fraction

from . import PCSteinerError
from .GRAPH import ValidationError, WeightedGraph, connectivity, formatRational, isAcyclic, toRational
from .INSTANCE import Pair
from .PD import MoatEngine

logger = logging.getLogger(__name__)


class CyclicForestError(PCSteinerError):
    """ Raised when the forest handed to the contraction contains a cycle. """


class ContractedGraph:
    """ Quotient of a graph by the trees of a forest.

    :param original: The graph before contraction.
    :type original: WeightedGraph
    :param graph: The quotient graph.
    :type graph: WeightedGraph
    :param vertexMap: Supervertex of every original vertex.
    :type vertexMap: tuple
    :param edgeOrigin: Original edge id behind every quotient edge.
    :type edgeOrigin: tuple
    :param trees: Original tree edges keyed by supervertex (contracted ones only).
    :type trees: dict
    :param potentials: Potential of every supervertex.
    :type potentials: tuple
    """
    def __init__(self, original, graph, vertexMap, edgeOrigin, trees, potentials, epsilon):
        self.original = original
        self.graph = graph
        self.vertexMap = vertexMap
        self.edgeOrigin = edgeOrigin
        self.trees = trees
        self.potentials = potentials
        self.epsilon = epsilon

    def membersOf(self, q):
        return [v for v, x in enumerate(self.vertexMap) if x == q]

    def uncontract(self, edgeIds):
        """ Original edges of the quotient edges plus the trees of every touched supervertex. """
        found = set()
        touched = set()
        for e in edgeIds:
            found.add(self.edgeOrigin[e])
            touched.update(self.graph.endpoints(e))
        for q in touched:
            found.update(self.trees.get(q, ()))
        return tuple(sorted(found))


def contractForest(graph, forest, epsilon):
    """ Contracts every tree of ``forest`` and assigns it ``Length(T)/epsilon`` potential.

    Supervertices are numbered by the smallest original vertex they contain.
    Parallel quotient edges are collapsed to the shortest, lowest id first.

    :raises CyclicForestError: When ``forest`` contains a cycle.
    :raises ValidationError: When epsilon is not positive.
    :rtype: ContractedGraph
    """
    epsilon = toRational(epsilon)
    if epsilon <= 0:
        raise ValidationError("Epsilon must be positive, got {}".format(epsilon))
    forest = sorted(set(forest))
    if not isAcyclic(graph, forest):
        raise CyclicForestError("Forest of {} edges contains a cycle".format(len(forest)))

    uf = connectivity(graph, forest)
    leaders = {}
    vertexMap = []
    for v in range(graph.n):
        leader = uf[v]
        if leader not in leaders:
            leaders[leader] = len(leaders)
        vertexMap.append(leaders[leader])

    trees = {}
    for e in forest:
        trees.setdefault(vertexMap[graph.edges[e][0]], []).append(e)
    potentials = [Fraction(0)] * len(leaders)
    for q, edges in trees.items():
        potentials[q] = graph.totalLength(edges) / epsilon

    best = {}
    for e, (u, v, length) in enumerate(graph.edges):
        a, b = vertexMap[u], vertexMap[v]
        if a == b:
            continue
        key = (min(a, b), max(a, b))
        if key not in best or length < best[key][1]:
            best[key] = (e, length)
    kept = sorted(best.items(), key=lambda item: item[1][0])
    quotient = WeightedGraph(len(leaders), [(a, b, length) for (a, b), (_, length) in kept])
    edgeOrigin = tuple(e for _, (e, _) in kept)
    logger.debug("Contracted {} trees, quotient has {} vertices and {} edges".format(
        len(trees), quotient.n, quotient.edgeCount))
    return ContractedGraph(graph, quotient, tuple(vertexMap), edgeOrigin,
                           {q: tuple(edges) for q, edges in trees.items()}, tuple(potentials), epsilon)


class ClusteringEngine(MoatEngine):
    """ Moat growth with one potential per component; growth is charged to the
    supervertices of a moat in ascending id while their budget lasts.
    """
    def __init__(self, contracted, debug=False, loggingLevel='off'):
        super().__init__(contracted.graph, contracted.potentials, debug, loggingLevel)
        self.residual = list(contracted.potentials)
        self.dual = {}

    def onGrow(self, record, dt):
        rest = dt
        for v in sorted(record.members):
            if rest == 0:
                break
            take = min(rest, self.residual[v])
            if take > 0:
                self.residual[v] -= take
                key = (v, record.id)
                self.dual[key] = self.dual.get(key, Fraction(0)) + take
                rest -= take
        if rest:
            self.logger.warning("Component {} grew {} beyond its members' budget".format(record.id, rest))


@dataclasses.dataclass
class ClusterRun:
    """ Result of a clustering run.

    ``dual`` maps ``(supervertex, component id)`` to the growth charged to that
    supervertex inside that moat.
    """
    contracted: ContractedGraph
    tight: tuple
    components: list
    dual: dict
    events: object
    pruned: tuple = None

    def deactivated(self):
        return [record for record in self.components if record.deactivated]

    def toDict(self):
        """ Returns the exportable clustering result.

        .. code-block:: text

            {
                "epsilon":"1/2",
                "tight":[0, 3],
                "pruned":[0],
                "prunedOriginal":[2, 5, 7],
                "supervertices":[{"id":0, "vertices":[0, 1], "tree":[2], "potential":"6"}]
            }

        :rtype: dict

        """
        contracted = self.contracted
        supervertices = []
        for q in range(contracted.graph.n):
            supervertices.append({'id': q, 'vertices': contracted.membersOf(q), 'tree': list(contracted.trees.get(q, ())),
                                  'potential': formatRational(contracted.potentials[q])})
        pruned = list(self.pruned) if self.pruned is not None else None
        return {'epsilon': formatRational(contracted.epsilon), 'tight': list(self.tight), 'pruned': pruned,
                'prunedOriginal': list(contracted.uncontract(self.pruned)) if self.pruned is not None else None,
                'supervertices': supervertices}

    def toJson(self):
        return json.dumps(self.toDict(), indent=2)


def runClustering(contracted, debug=False, loggingLevel='off'):
    """ Grows moats on the quotient graph until every component is inactive.

    :param contracted: The contracted graph with its potentials.
    :type contracted: ContractedGraph
    :rtype: ClusterRun
    """
    engine = ClusteringEngine(contracted, debug, loggingLevel)
    tight = engine.grow()
    engine.logger.info("Clustering grew {} tight edges over {} supervertices".format(len(tight), contracted.graph.n))
    return ClusterRun(contracted, tuple(tight), engine.components, engine.dual, engine.events)


def _crossing(graph, members, edges):
    return [e for e in edges if (graph.edges[e][0] in members) != (graph.edges[e][1] in members)]


def prune(run):
    """ Removes, until nothing changes, every tight edge that is the only one
    leaving some deactivated component.

    :param run: A finished clustering run, updated in place.
    :type run: ClusterRun
    :return: The pruned forest.
    :rtype: tuple
    """
    graph = run.contracted.graph
    kept = set(run.tight)
    inactive = run.deactivated()
    changed = True
    while changed:
        changed = False
        for record in inactive:
            crossing = _crossing(graph, record.members, kept)
            if len(crossing) == 1:
                kept.discard(crossing[0])
                logger.debug("Pruned edge {} leaving inactive component {}".format(crossing[0], record.id))
                changed = True
    run.pruned = tuple(sorted(kept))
    return run.pruned


@dataclasses.dataclass(frozen=True)
class SubInstance:
    """ One independent piece of the split: the instance keeps the whole graph but
    only the pairs its tree connects stay positive.
    """
    index: int
    instance: object
    treeEdges: tuple
    vertices: frozenset
    pairIds: tuple


def splitInstances(instance, run):
    """ Splits a normalized forest instance along the trees of the pruned forest.

    :param instance: The instance the clustering was computed for.
    :type instance: PcInstance
    :param run: A pruned clustering run.
    :type run: ClusterRun
    :return: ``(subInstances, straddling)``; straddling pairs are separated in every
        sub-instance and their penalties are paid unconditionally.
    :rtype: tuple
    """
    contracted = run.contracted
    quotient = contracted.graph
    uf = connectivity(quotient, run.pruned)
    groups = {}
    for q in range(quotient.n):
        groups.setdefault(uf[q], []).append(q)

    pairsOf = {}
    straddling = []
    for i, pair in enumerate(instance.pairs):
        if pair.penalty == 0:
            continue
        a, b = contracted.vertexMap[pair.s], contracted.vertexMap[pair.t]
        if uf[a] == uf[b]:
            pairsOf.setdefault(uf[a], []).append(i)
        else:
            straddling.append(i)

    pieces = []
    for leader in sorted(pairsOf, key=lambda x: min(groups[x])):
        supervertices = set(groups[leader])
        quotientEdges = [e for e in run.pruned if quotient.edges[e][0] in supervertices]
        treeEdges = set(contracted.uncontract(quotientEdges))
        for q in supervertices:
            treeEdges.update(contracted.trees.get(q, ()))
        vertices = frozenset(v for v, q in enumerate(contracted.vertexMap) if q in supervertices)
        ids = tuple(pairsOf[leader])
        pairs = tuple(pair if i in ids else Pair(pair.s, pair.t, Fraction(0)) for i, pair in enumerate(instance.pairs))
        piece = dataclasses.replace(instance, pairs=pairs)
        pieces.append(SubInstance(len(pieces), piece, tuple(sorted(treeEdges)), vertices, ids))
    logger.debug("Split into {} sub-instances, {} straddling pairs".format(len(pieces), len(straddling)))
    return pieces, straddling


def exhaustedVertices(run, edges):
    """ Supervertices whose every positive moat is crossed by ``edges``.

    :param run: A finished clustering run.
    :type run: ClusterRun
    :param edges: Quotient edge ids.
    :type edges: iterable
    :rtype: set
    """
    graph = run.contracted.graph
    edges = list(edges)
    moats = {}
    for (v, c), y in run.dual.items():
        if y > 0:
            moats.setdefault(v, []).append(c)
    exhausted = set()
    for v in range(graph.n):
        if all(_crossing(graph, run.components[c].members, edges) for c in moats.get(v, ())):
            exhausted.add(v)
    return exhausted


def verifyClusterDual(run):
    """ Checks the clustering dual: per-edge capacity, per-supervertex budget and
    that every moat's growth is fully charged.

    :rtype: dict
    """
    contracted = run.contracted
    graph = contracted.graph
    violations = []
    spent = {}
    charged = {}
    for (v, c), y in run.dual.items():
        spent[v] = spent.get(v, Fraction(0)) + y
        charged[c] = charged.get(c, Fraction(0)) + y
    for v, total in sorted(spent.items()):
        if total > contracted.potentials[v]:
            violations.append({'kind': 'budget', 'supervertex': v, 'load': total, 'capacity': contracted.potentials[v]})
    for record in run.components:
        if charged.get(record.id, Fraction(0)) != record.y:
            violations.append({'kind': 'component', 'component': record.id, 'y': record.y,
                               'charged': charged.get(record.id, Fraction(0))})
    for e, (u, v, length) in enumerate(graph.edges):
        load = sum((record.y for record in run.components if (u in record.members) != (v in record.members)), Fraction(0))
        if load > length:
            violations.append({'kind': 'edge', 'edge': e, 'load': load, 'capacity': length})
    return {'passed': not violations, 'violations': violations}


def checkClusterLength(run):
    """ The pruned forest is at most twice the total supervertex potential.

    :rtype: dict
    """
    length = run.contracted.graph.totalLength(run.pruned or ())
    bound = 2 * sum(run.contracted.potentials, Fraction(0))
    return {'passed': length <= bound, 'length': length, 'bound': bound}
