# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

'''
Exact prize-collecting Steiner tree over a nice tree decomposition

For every node ``i``, subgraph ``H`` of the bag and partition ``alpha`` of ``V(H)``,
the table holds the cheapest forest ``F`` inside the subtree graph such that ``F``
restricted to the bag is ``H``, every component of ``F`` meets ``V(H)``, and two bag
vertices share a component exactly when they share a part of ``alpha``. The cost is
``Length(F)`` plus the penalties of subtree vertices outside ``F``.
'''

import dataclasses
import itertools
from fractions import Fraction

from networkx.utils import UnionFind

from . import AppLogger
from .GRAPH import isAcyclic
from .INSTANCE import TREE, evaluate
from .TD import FORGET, INTRODUCE, JOIN, LEAF, DecompositionError


@dataclasses.dataclass(frozen=True)
class Partition:
    """ Canonical partition: parts are sorted tuples, ordered by their minimum. """
    parts: tuple

    @classmethod
    def of(cls, parts):
        parts = [tuple(sorted(p)) for p in parts if p]
        return cls(tuple(sorted(parts)))

    @property
    def ground(self):
        return frozenset(v for p in self.parts for v in p)

    def partOf(self, v):
        for p in self.parts:
            if v in p:
                return p
        raise KeyError(v)

    def join(self, other):
        return joinPartitions(self, other)

    def refines(self, other):
        """ True when every part of ``self`` lies inside a part of ``other``. """
        if self.ground != other.ground:
            return False
        return all(set(p) <= set(other.partOf(p[0])) for p in self.parts)

    def mergeVertex(self, v, vertices):
        """ Merges ``v`` with every part that meets ``vertices``. """
        vertices = set(vertices)
        merged = [v]
        rest = []
        for p in self.parts:
            if vertices & set(p):
                merged.extend(p)
            else:
                rest.append(p)
        return Partition.of(rest + [merged])

    def hasOnePerPart(self, vertices):
        """ True when no part holds two of ``vertices``. """
        seen = set()
        for v in vertices:
            part = self.partOf(v)
            if part in seen:
                return False
            seen.add(part)
        return True

    def __str__(self):
        return "{" + ", ".join("{" + ",".join(str(v) for v in p) + "}" for p in self.parts) + "}"


def joinPartitions(first, second):
    """ Finest partition coarser than both arguments.

    :raises ValueError: When the ground sets differ.
    :rtype: Partition
    """
    if first.ground != second.ground:
        raise ValueError("Partitions over different ground sets")
    uf = UnionFind(sorted(first.ground))
    for p in first.parts + second.parts:
        uf.union(*p)
    return Partition.of(uf.to_sets())


def _setPartitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partial in _setPartitions(rest):
        yield [[first]] + partial
        for i in range(len(partial)):
            yield partial[:i] + [[first] + partial[i]] + partial[i + 1:]


def coarserPartitions(base):
    """ Every partition coarser than ``base``, in a fixed order. """
    for grouping in _setPartitions(list(base.parts)):
        yield Partition.of([v for block in group for v in block] for group in grouping)


def partitionsBetween(fine, coarse):
    """ Every partition ``p`` with ``fine`` refining ``p`` and ``p`` refining ``coarse``. """
    choices = []
    for outer in coarse.parts:
        inside = [p for p in fine.parts if p[0] in outer]
        choices.append([[[v for block in group for v in block] for group in grouping]
                        for grouping in _setPartitions(inside)])
    for combination in itertools.product(*choices):
        yield Partition.of([part for grouping in combination for part in grouping])


def bellNumber(k):
    row = [1]
    for _ in range(k):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        row = nxt
    return row[0]


@dataclasses.dataclass(frozen=True)
class BagSubgraph:
    vertices: frozenset
    edges: frozenset

    def sortKey(self):
        return (len(self.vertices), sorted(self.vertices), len(self.edges), sorted(self.edges))


def componentPartition(graph, subgraph):
    """ Partition of ``V(H)`` into the connected components of ``H``. """
    uf = UnionFind(sorted(subgraph.vertices))
    for e in subgraph.edges:
        u, v, _ = graph.edges[e]
        uf.union(u, v)
    return Partition.of(uf.to_sets())


def bagSubgraphs(graph, bag):
    """ Every acyclic subgraph of ``G[bag]``, smallest first. """
    found = []
    bag = sorted(bag)
    for size in range(len(bag) + 1):
        for vertices in itertools.combinations(bag, size):
            inner = graph.edgesWithin(vertices)
            for count in range(len(inner) + 1):
                for edges in itertools.combinations(inner, count):
                    if isAcyclic(graph, edges):
                        found.append(BagSubgraph(frozenset(vertices), frozenset(edges)))
    return found


@dataclasses.dataclass(frozen=True)
class DpEntry:
    cost: Fraction
    edges: tuple
    back: tuple = ()

    def key(self):
        return (self.cost, self.edges)


class PcstDynamicProgram:
    """ Bottom-up table over a nice tree decomposition for a rooted vertex-penalty instance.

    :param instance: Tree-mode instance.
    :type instance: PcInstance
    :param nice: Nice decomposition of the instance graph.
    :type nice: NiceTreeDecomposition
    :param debug: Debug logging control, defaults to False
    :type debug: bool, optional
    :param loggingLevel: One of 'off', 'error' or 'full' to control file logging, defaults to 'off'
    :type loggingLevel: str, optional
    """
    def __init__(self, instance, nice, debug=False, loggingLevel='off'):
        self.logger = AppLogger.getLogger(__name__, debug, loggingLevel)
        if instance.mode != TREE:
            raise DecompositionError("The exact program needs a rooted vertex-penalty instance")
        self.instance = instance
        self.graph = instance.graph
        self.nice = nice
        self.tables = {}
        self._subgraphs = {}

    def _penalty(self, vertices):
        return sum((self.instance.vertexPenalties[v] for v in vertices), Fraction(0))

    def _length(self, subgraph):
        return self.graph.totalLength(subgraph.edges)

    def subgraphsOf(self, bag):
        if bag not in self._subgraphs:
            self._subgraphs[bag] = bagSubgraphs(self.graph, bag)
        return self._subgraphs[bag]

    def lookup(self, node, subgraph, partition):
        return self.tables.get(node, {}).get((subgraph, partition))

    def solveLeaf(self, i, subgraph, partition):
        if partition != componentPartition(self.graph, subgraph):
            return None
        bag = self.nice.nodes[i].bag
        cost = self._length(subgraph) + self._penalty(bag - subgraph.vertices)
        return DpEntry(cost, tuple(sorted(subgraph.edges)))

    def solveIntroduce(self, i, subgraph, partition):
        node = self.nice.nodes[i]
        child = node.children[0]
        v = node.vertex
        if v not in subgraph.vertices:
            entry = self.lookup(child, subgraph, partition)
            if entry is None:
                return None
            return DpEntry(entry.cost + self.instance.vertexPenalties[v], entry.edges, ((child, subgraph, partition),))

        atV = sorted(e for e in subgraph.edges if v in self.graph.endpoints(e))
        attached = sorted(set(self.graph.other(e, v) for e in atV))
        reduced = BagSubgraph(subgraph.vertices - {v}, subgraph.edges - set(atV))
        part = partition.partOf(v)
        others = [p for p in partition.parts if p != part]
        extra = self.graph.totalLength(atV)
        rest = [x for x in part if x != v and x not in attached]
        if not attached:
            if part != (v,):
                return None
            candidates = [Partition.of(others)]
        else:
            candidates = []
            for assignment in itertools.product(attached, repeat=len(rest)):
                groups = {s: [s] for s in attached}
                for x, s in zip(rest, assignment):
                    groups[s].append(x)
                candidates.append(Partition.of(others + list(groups.values())))

        best = None
        for childPartition in candidates:
            entry = self.lookup(child, reduced, childPartition)
            if entry is None:
                continue
            option = DpEntry(entry.cost + extra, tuple(sorted(set(entry.edges) | set(atV))),
                             ((child, reduced, childPartition),))
            if best is None or option.key() < best.key():
                best = option
        return best

    def solveForget(self, i, subgraph, partition):
        node = self.nice.nodes[i]
        child = node.children[0]
        v = node.vertex
        best = None
        entry = self.lookup(child, subgraph, partition)
        if entry is not None:
            best = DpEntry(entry.cost, entry.edges, ((child, subgraph, partition),))
        childBag = self.nice.nodes[child].bag
        toBag = [e for e in self.graph.edgesWithin(childBag) if v in self.graph.endpoints(e)]
        for part in partition.parts:
            members = set(part)
            options = [e for e in toBag if self.graph.other(e, v) in members]
            grown = Partition.of([p for p in partition.parts if p != part] + [list(part) + [v]])
            for count in range(len(options) + 1):
                for chosen in itertools.combinations(options, count):
                    wider = BagSubgraph(subgraph.vertices | {v}, subgraph.edges | set(chosen))
                    entry = self.lookup(child, wider, grown)
                    if entry is None:
                        continue
                    option = DpEntry(entry.cost, entry.edges, ((child, wider, grown),))
                    if best is None or option.key() < best.key():
                        best = option
        return best

    def solveJoin(self, i, subgraph, partition):
        node = self.nice.nodes[i]
        left, right = node.children
        base = componentPartition(self.graph, subgraph)
        correction = self._length(subgraph) + self._penalty(node.bag - subgraph.vertices)
        between = list(partitionsBetween(base, partition))
        best = None
        for first in between:
            a = self.lookup(left, subgraph, first)
            if a is None:
                continue
            for second in between:
                if joinPartitions(first, second) != partition:
                    continue
                b = self.lookup(right, subgraph, second)
                if b is None:
                    continue
                option = DpEntry(a.cost + b.cost - correction, tuple(sorted(set(a.edges) | set(b.edges))),
                                 ((left, subgraph, first), (right, subgraph, second)))
                if best is None or option.key() < best.key():
                    best = option
        return best

    def run(self):
        """ Fills every table, children first. """
        solvers = {LEAF: self.solveLeaf, INTRODUCE: self.solveIntroduce,
                   FORGET: self.solveForget, JOIN: self.solveJoin}
        for i, node in enumerate(self.nice.nodes):
            solve = solvers[node.kind]
            table = {}
            for subgraph in self.subgraphsOf(node.bag):
                for partition in coarserPartitions(componentPartition(self.graph, subgraph)):
                    entry = solve(i, subgraph, partition)
                    if entry is not None:
                        table[(subgraph, partition)] = entry
            self.tables[i] = table
            self.logger.debug("Node {} ({}, bag {}): {} entries".format(i, node.kind, sorted(node.bag), len(table)))
        return self.tables

    def reconstruct(self, node, subgraph, partition):
        """ Collects the solution edges by following backpointers. """
        edges = set()
        stack = [(node, subgraph, partition)]
        while stack:
            key = stack.pop()
            edges.update(key[1].edges)
            stack.extend(self.tables[key[0]][(key[1], key[2])].back)
        return tuple(sorted(edges))

    def solve(self):
        """ Runs the program and extracts the optimal tree.

        :raises DecompositionError: When the root bag lacks the instance root.
        :return: The evaluated tree and the table cost.
        :rtype: tuple
        """
        root = self.instance.root
        top = self.nice.root
        if root not in self.nice.nodes[top].bag:
            raise DecompositionError("Root vertex {} is not in the root bag".format(root))
        if not self.tables:
            self.run()
        best = None
        for (subgraph, partition), entry in self.tables[top].items():
            if root in subgraph.vertices and len(partition.parts) == 1:
                if best is None or entry.key() < best[0].key():
                    best = (entry, subgraph, partition)
        entry, subgraph, partition = best
        edges = self.reconstruct(top, subgraph, partition)
        tree = evaluate(self.instance, edges)
        if tree.cost != entry.cost:
            self.logger.error("Could not reconcile table cost {} with tree cost {}".format(entry.cost, tree.cost))
        self.logger.info("Exact program cost {} over {} nodes".format(entry.cost, len(self.nice.nodes)))
        return tree, entry.cost

    def stats(self):
        """ Returns a dictionary containing table statistics.

        .. code-block:: text

            {
                "nodes":12,
                "maxBag":3,
                "subgraphsPerBag":38,
                "bell":5,
                "entries":211,
                "bound":2280
            }

        :rtype: dict

        """
        maxBag = max(len(node.bag) for node in self.nice.nodes)
        perBag = max(len(self.subgraphsOf(node.bag)) for node in self.nice.nodes)
        bell = bellNumber(maxBag)
        return {'nodes': len(self.nice.nodes), 'maxBag': maxBag, 'subgraphsPerBag': perBag, 'bell': bell,
                'entries': sum(len(t) for t in self.tables.values()),
                'bound': len(self.nice.nodes) * perBag * bell}

    def dump(self):
        """ Table rows ``(node, vertices, edges, partition, cost)`` for debugging small widths. """
        rows = []
        for i in sorted(self.tables):
            for (subgraph, partition), entry in sorted(self.tables[i].items(), key=lambda item: item[0][0].sortKey()):
                rows.append((i, sorted(subgraph.vertices), sorted(subgraph.edges), str(partition), str(entry.cost)))
        return rows


def solvePcst(instance, nice, debug=False, loggingLevel='off'):
    """ Optimal prize-collecting Steiner tree through the exact program.

    :return: ``(tree, cost)``
    :rtype: tuple
    """
    return PcstDynamicProgram(instance, nice, debug, loggingLevel).solve()
