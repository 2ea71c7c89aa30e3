# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

'''
Tree decompositions, nice tree decompositions, edge partitioning and contraction
'''

import dataclasses
import logging
from fractions import Fraction

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_degree, treewidth_min_fill_in
from networkx.utils import UnionFind

from . import PCSteinerError
from .GRAPH import InstanceTooLargeError, ValidationError, WeightedGraph, spanningForest
from .INSTANCE import TREE, Pair, PcInstance

logger = logging.getLogger(__name__)

LEAF = 'leaf'
INTRODUCE = 'introduce'
FORGET = 'forget'
JOIN = 'join'

EXACT_TREEWIDTH_CAP = 10


class DecompositionError(PCSteinerError):
    """ Raised for unusable tree decompositions (root outside every bag, malformed nice form). """


@dataclasses.dataclass(frozen=True)
class TreeDecomposition:
    """ Bags indexed ``0 .. len(bags)-1`` joined by ``treeEdges``. """
    bags: tuple
    treeEdges: tuple = ()

    @property
    def width(self):
        return max((len(b) for b in self.bags), default=0) - 1

    def toNetworkx(self):
        tree = nx.Graph()
        tree.add_nodes_from(range(len(self.bags)))
        tree.add_edges_from(self.treeEdges)
        return tree


def _simpleGraph(graph):
    simple = nx.Graph()
    simple.add_nodes_from(range(graph.n))
    simple.add_edges_from((u, v) for u, v, _ in graph.edges if u != v)
    return simple


def _fromNetworkx(decomposition):
    bags = sorted(decomposition.nodes, key=lambda b: (sorted(b), len(b)))
    index = {b: i for i, b in enumerate(bags)}
    edges = sorted(tuple(sorted((index[a], index[b]))) for a, b in decomposition.edges)
    return TreeDecomposition(tuple(frozenset(b) for b in bags), tuple(edges))


def heuristicDecomposition(graph):
    """ Tree decomposition from the min-fill-in heuristic, or min-degree when that is narrower.

    :param graph: Graph to decompose (loops and parallel edges are irrelevant).
    :type graph: WeightedGraph
    :rtype: TreeDecomposition
    """
    if graph.n == 0:
        return TreeDecomposition((frozenset(),), ())
    simple = _simpleGraph(graph)
    fillWidth, fillTree = treewidth_min_fill_in(simple)
    degreeWidth, degreeTree = treewidth_min_degree(simple)
    logger.debug("Heuristic widths: min-fill {}, min-degree {}".format(fillWidth, degreeWidth))
    if degreeWidth < fillWidth:
        return _fromNetworkx(degreeTree)
    return _fromNetworkx(fillTree)


def verifyDecomposition(graph, decomposition):
    """ Checks the three tree decomposition properties.

    :return: A dictionary containing:

    .. code-block:: text

        {
            "passed":True,
            "width":2,
            "bags":5,
            "violations":[]
        }

    :rtype: dict

    """
    violations = []
    bags = decomposition.bags
    tree = decomposition.toNetworkx()
    if not bags or not nx.is_tree(tree):
        violations.append({'kind': 'tree'})

    holders = {v: [] for v in range(graph.n)}
    for i, bag in enumerate(bags):
        for v in bag:
            if v not in holders:
                violations.append({'kind': 'unknown-vertex', 'vertex': v, 'bag': i})
            else:
                holders[v].append(i)
    for v, nodes in holders.items():
        if not nodes:
            violations.append({'kind': 'vertex', 'vertex': v})
        elif bags and not nx.is_connected(tree.subgraph(nodes)):
            violations.append({'kind': 'connectivity', 'vertex': v})
    for e, (u, v, _) in enumerate(graph.edges):
        if u != v and not any(u in bag and v in bag for bag in bags):
            violations.append({'kind': 'edge', 'edge': e})
    return {'passed': not violations, 'width': decomposition.width, 'bags': len(bags), 'violations': violations}


@dataclasses.dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: frozenset
    children: tuple = ()
    vertex: int = None


@dataclasses.dataclass(frozen=True)
class NiceTreeDecomposition:
    """ Rooted nice decomposition. Node ids are topologically ordered: children before parents. """
    nodes: tuple
    root: int

    @property
    def width(self):
        return max(len(node.bag) for node in self.nodes) - 1

    def asTreeDecomposition(self):
        edges = tuple((child, i) for i, node in enumerate(self.nodes) for child in node.children)
        return TreeDecomposition(tuple(node.bag for node in self.nodes), edges)

    def kindCounts(self):
        counts = {LEAF: 0, INTRODUCE: 0, FORGET: 0, JOIN: 0}
        for node in self.nodes:
            counts[node.kind] += 1
        return counts


class _NiceBuilder:
    def __init__(self):
        self.nodes = []

    def add(self, kind, bag, children=(), vertex=None):
        self.nodes.append(NiceNode(kind, frozenset(bag), tuple(children), vertex))
        return len(self.nodes) - 1

    def introduce(self, child, v):
        return self.add(INTRODUCE, self.nodes[child].bag | {v}, (child,), v)

    def forget(self, child, v):
        return self.add(FORGET, self.nodes[child].bag - {v}, (child,), v)


def makeNice(decomposition, root):
    """ Converts a tree decomposition into a nice one rooted at a bag that holds ``root``.

    Leaves get empty bags followed by introduce chains; every child is reached through
    forgets then introduces; nodes with several children fold them with binary joins.
    If no bag holds ``root`` an introduce node for it is put on top.

    :param decomposition: Decomposition to convert.
    :type decomposition: TreeDecomposition
    :param root: Vertex that must appear in the root bag.
    :type root: int
    :rtype: NiceTreeDecomposition
    """
    bags = decomposition.bags
    if not bags:
        raise DecompositionError("Decomposition has no bags")
    tree = decomposition.toNetworkx()
    if not nx.is_tree(tree):
        raise DecompositionError("Decomposition graph is not a tree")
    holders = [i for i, bag in enumerate(bags) if root in bag]
    top = holders[0] if holders else 0

    children = {i: [] for i in range(len(bags))}
    order = [top]
    parent = {top: None}
    for x in order:
        for y in sorted(tree.neighbors(x)):
            if y not in parent:
                parent[y] = x
                children[x].append(y)
                order.append(y)

    builder = _NiceBuilder()
    built = {}
    for x in reversed(order):
        bag = bags[x]
        if not children[x]:
            cur = builder.add(LEAF, ())
            for v in sorted(bag):
                cur = builder.introduce(cur, v)
            built[x] = cur
            continue
        branches = []
        for c in children[x]:
            cur = built[c]
            for v in sorted(bags[c] - bag):
                cur = builder.forget(cur, v)
            for v in sorted(bag - bags[c]):
                cur = builder.introduce(cur, v)
            branches.append(cur)
        cur = branches[0]
        for other in branches[1:]:
            cur = builder.add(JOIN, bag, (cur, other))
        built[x] = cur

    rootNode = built[top]
    if root not in builder.nodes[rootNode].bag:
        rootNode = builder.introduce(rootNode, root)
    nice = NiceTreeDecomposition(tuple(builder.nodes), rootNode)
    logger.debug("Nice decomposition with {} nodes, width {}".format(len(nice.nodes), nice.width))
    return nice


def verifyNice(nice):
    """ Checks the node-kind rules of a nice decomposition; returns a report dictionary. """
    violations = []
    for i, node in enumerate(nice.nodes):
        kids = [nice.nodes[c] for c in node.children]
        if any(c >= i for c in node.children):
            violations.append({'kind': 'order', 'node': i})
        if node.kind == LEAF:
            ok = not kids
        elif node.kind == INTRODUCE:
            ok = len(kids) == 1 and node.vertex not in kids[0].bag and node.bag == kids[0].bag | {node.vertex}
        elif node.kind == FORGET:
            ok = len(kids) == 1 and node.vertex in kids[0].bag and node.bag == kids[0].bag - {node.vertex}
        elif node.kind == JOIN:
            ok = len(kids) == 2 and kids[0].bag == node.bag and kids[1].bag == node.bag
        else:
            ok = False
        if not ok:
            violations.append({'kind': node.kind, 'node': i})
    return {'passed': not violations, 'nodes': len(nice.nodes), 'violations': violations}


def exactTreewidth(graph):
    """ Exact treewidth by dynamic programming over vertex subsets (elimination orders).

    :raises InstanceTooLargeError: Above ten vertices.
    :rtype: int
    """
    n = graph.n
    if n > EXACT_TREEWIDTH_CAP:
        raise InstanceTooLargeError("Exact treewidth is capped at {} vertices, got {}".format(EXACT_TREEWIDTH_CAP, n))
    if n == 0:
        return -1
    neighbours = [0] * n
    for u, v, _ in graph.edges:
        if u != v:
            neighbours[u] |= 1 << v
            neighbours[v] |= 1 << u

    def reachableOutside(inside, v):
        # vertices outside inside+{v} reachable from v through inside
        seen = 1 << v
        frontier = [v]
        found = 0
        while frontier:
            x = frontier.pop()
            for w in range(n):
                bit = 1 << w
                if neighbours[x] & bit and not seen & bit:
                    seen |= bit
                    if inside & bit:
                        frontier.append(w)
                    else:
                        found |= bit
        return bin(found).count('1')

    best = {0: -1}
    for subset in range(1, 1 << n):
        value = None
        for v in range(n):
            if subset >> v & 1:
                rest = subset & ~(1 << v)
                candidate = max(best[rest], reachableOutside(rest, v))
                if value is None or candidate < value:
                    value = candidate
        best[subset] = value
    return best[(1 << n) - 1]


@dataclasses.dataclass(frozen=True)
class EdgePartition:
    """ Edge classes by BFS level modulo ``k`` and the class of minimum length. """
    classes: tuple
    lengths: tuple
    selected: int

    @property
    def selectedEdges(self):
        return self.classes[self.selected]


def partitionEdges(graph, k, root=None):
    """ Splits the edges into ``k`` classes by BFS level modulo ``k``.

    Levels are counted from the lowest vertex of every component (or from ``root``
    in its component); an edge takes the smaller level of its endpoints. The
    selected class is the lightest one, lowest index on ties.

    :raises ValidationError: When ``k < 2``.
    :rtype: EdgePartition
    """
    if k < 2:
        raise ValidationError("Partition needs k >= 2, got {}".format(k))
    simple = _simpleGraph(graph)
    level = {}
    starts = [root] if root is not None else []
    starts += list(range(graph.n))
    for s in starts:
        if s in level:
            continue
        level.update(nx.single_source_shortest_path_length(simple, s))
    classes = [[] for _ in range(k)]
    for e, (u, v, _) in enumerate(graph.edges):
        classes[min(level[u], level[v]) % k].append(e)
    lengths = tuple(graph.totalLength(c) for c in classes)
    selected = min(range(k), key=lambda i: (lengths[i], i))
    logger.debug("Edge class lengths {}, selected {}".format([str(x) for x in lengths], selected))
    return EdgePartition(tuple(tuple(c) for c in classes), lengths, selected)


class Contraction:
    """ Result of contracting an edge set, with the lift back to the original graph.

    :param graph: Original graph ``h``.
    :type graph: WeightedGraph
    :param contracted: Edge ids of ``h`` that were contracted.
    :type contracted: tuple
    """
    def __init__(self, graph, contracted, classOf, classes, edgeOrigin, instance, mergedPairs, pairOrigin):
        self.original = graph
        self.contracted = tuple(contracted)
        self.classOf = classOf
        self.classes = classes
        self.edgeOrigin = edgeOrigin
        self.instance = instance
        self.mergedPairs = mergedPairs
        self.pairOrigin = pairOrigin

    @property
    def graph(self):
        return self.instance.graph

    def lift(self, edgeIds, treeMode=None):
        """ Maps a solution of the contracted instance back onto ``h``.

        Tree mode adds a spanning forest of the contracted classes that the solution
        or the root touches; forest mode adds a spanning forest of all contracted edges.

        :rtype: tuple
        """
        if treeMode is None:
            treeMode = self.instance.mode == TREE
        mapped = set(self.edgeOrigin[f] for f in edgeIds)
        if treeMode:
            touched = set()
            for e in mapped:
                u, v, _ = self.original.edges[e]
                touched.update((self.classOf[u], self.classOf[v]))
            touched.add(self.instance.root)
            candidates = [e for e in self.contracted if self.classOf[self.original.edges[e][0]] in touched]
        else:
            candidates = list(self.contracted)
        mapped.update(spanningForest(self.original, candidates))
        return tuple(sorted(mapped))


def contractEdges(graph, contracted, instance):
    """ Contracts an edge set and remaps the instance onto the quotient graph.

    Loops produced by the contraction are dropped, parallel edges are kept. Pairs
    whose endpoints merge are dropped (recorded in ``mergedPairs``); tree-mode
    penalties are summed per class.

    :param graph: Graph ``h``.
    :type graph: WeightedGraph
    :param contracted: Edge ids to contract.
    :type contracted: iterable
    :param instance: Instance on ``h``.
    :type instance: PcInstance
    :rtype: Contraction
    """
    contracted = sorted(set(contracted))
    uf = UnionFind(range(graph.n))
    for e in contracted:
        u, v, _ = graph.edges[e]
        uf.union(u, v)
    representatives = {}
    classOf = []
    classes = []
    for v in range(graph.n):
        r = uf[v]
        if r not in representatives:
            representatives[r] = len(classes)
            classes.append([])
        classes[representatives[r]].append(v)
        classOf.append(representatives[r])
    classOf = tuple(classOf)

    skip = set(contracted)
    edges = []
    edgeOrigin = []
    for e, (u, v, length) in enumerate(graph.edges):
        if e in skip or classOf[u] == classOf[v]:
            continue
        edges.append((classOf[u], classOf[v], length))
        edgeOrigin.append(e)
    quotient = WeightedGraph(len(classes), edges)

    mergedPairs = []
    pairOrigin = []
    if instance.mode == TREE:
        penalties = [Fraction(0)] * len(classes)
        for v, p in enumerate(instance.vertexPenalties):
            penalties[classOf[v]] += p
        remapped = PcInstance(quotient, TREE, root=classOf[instance.root], vertexPenalties=tuple(penalties),
                              name=instance.name)
    else:
        pairs = []
        for i, pair in enumerate(instance.pairs):
            s, t = classOf[pair.s], classOf[pair.t]
            if s == t:
                mergedPairs.append(i)
                continue
            pairs.append(Pair(s, t, pair.penalty))
            pairOrigin.append(i)
        root = classOf[instance.root] if instance.root is not None else None
        remapped = PcInstance(quotient, instance.mode, pairs=tuple(pairs), root=root, name=instance.name)
    logger.debug("Contracted {} edges: {} -> {} vertices, {} merged pairs".format(
        len(contracted), graph.n, quotient.n, len(mergedPairs)))
    return Contraction(graph, contracted, classOf, tuple(tuple(c) for c in classes), tuple(edgeOrigin),
                       remapped, tuple(mergedPairs), tuple(pairOrigin))
