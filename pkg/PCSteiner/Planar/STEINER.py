# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

'''
Exact Steiner oracles: Dreyfus-Wagner subset dynamic programming and brute-force
prize-collecting solvers for small instances
'''

import itertools
import logging
from fractions import Fraction

import networkx as nx

from .GRAPH import InstanceTooLargeError, edgeBetween, isAcyclic, spanningForest
from .INSTANCE import TREE, evaluate

logger = logging.getLogger(__name__)


class DreyfusWagner:
    """ Subset dynamic program over terminal sets.

    ``cost(mask, v)`` is the length of a cheapest tree spanning the terminals in
    ``mask`` together with vertex ``v``.

    :param graph: Host graph.
    :type graph: WeightedGraph
    :param terminals: Terminal vertices.
    :type terminals: iterable
    :param edgeIds: Restrict the host graph to these edges, defaults to all.
    :type edgeIds: iterable, optional
    :param cap: Largest terminal count accepted, defaults to 10
    :type cap: int, optional
    """
    def __init__(self, graph, terminals, edgeIds=None, cap=10):
        self.graph = graph
        self.terminals = list(dict.fromkeys(terminals))
        if len(self.terminals) > cap:
            raise InstanceTooLargeError("Dreyfus-Wagner is capped at {} terminals, got {}".format(cap, len(self.terminals)))
        self.host = graph.toNetworkx(edgeIds)
        self.nodes = sorted(self.host.nodes)
        self.distance = {}
        self.paths = {}
        for u in self.nodes:
            self.distance[u], self.paths[u] = nx.single_source_dijkstra(self.host, u, weight='length')

        k = len(self.terminals)
        self.table = [dict() for _ in range(1 << k)]
        self.choice = [dict() for _ in range(1 << k)]
        for u in self.nodes:
            self.table[0][u] = Fraction(0)
            self.choice[0][u] = (u, None)
        for i, t in enumerate(self.terminals):
            for v, d in self.distance[t].items():
                self.table[1 << i][v] = d
                self.choice[1 << i][v] = (t, None)

        for mask in range(1, 1 << k):
            if mask & (mask - 1) == 0:
                continue
            low = mask & -mask
            merged = {}
            sub = (mask - 1) & mask
            while sub:
                if sub & low:
                    first, second = self.table[sub], self.table[mask ^ sub]
                    for v, a in first.items():
                        b = second.get(v)
                        if b is None:
                            continue
                        if v not in merged or a + b < merged[v][0]:
                            merged[v] = (a + b, sub)
                sub = (sub - 1) & mask
            row, rowChoice = self.table[mask], self.choice[mask]
            for u, (c, sub) in sorted(merged.items()):
                for v, d in self.distance[u].items():
                    if v not in row or c + d < row[v]:
                        row[v] = c + d
                        rowChoice[v] = (u, sub)

    def _mask(self, vertices):
        index = {t: i for i, t in enumerate(self.terminals)}
        mask = 0
        for v in vertices:
            mask |= 1 << index[v]
        return mask

    def cost(self, mask, v):
        """ Table value, ``None`` when ``v`` cannot reach every terminal in ``mask``. """
        return self.table[mask].get(v)

    def edges(self, mask, v):
        """ Edge ids of the tree behind ``cost(mask, v)``. """
        found = set()
        stack = [(mask, v)]
        while stack:
            m, x = stack.pop()
            u, sub = self.choice[m][x]
            nodes = self.paths[u][x]
            for a, b in zip(nodes, nodes[1:]):
                found.add(edgeBetween(self.host, a, b))
            if sub is not None:
                stack.append((sub, u))
                stack.append((m ^ sub, u))
        return found

    def treeCost(self, mask):
        if mask & (mask - 1) == 0:
            return Fraction(0)
        low = (mask & -mask).bit_length() - 1
        return self.cost(mask ^ (1 << low), self.terminals[low])

    def tree(self, mask):
        """ Cleaned Steiner tree of the terminals in ``mask``.

        :return: ``(edges, length)``, or ``(None, None)`` when they are disconnected.
        :rtype: tuple
        """
        if mask & (mask - 1) == 0:
            return (), Fraction(0)
        low = (mask & -mask).bit_length() - 1
        anchor = self.terminals[low]
        if self.cost(mask ^ (1 << low), anchor) is None:
            return None, None
        keep = {self.terminals[i] for i in range(len(self.terminals)) if mask >> i & 1}
        edges = self.clean(self.edges(mask ^ (1 << low), anchor), keep)
        return edges, self.graph.totalLength(edges)

    def clean(self, edges, keep):
        """ Minimum spanning forest of ``edges`` with non-terminal leaves pruned. """
        sub = nx.MultiGraph()
        for e in sorted(edges):
            u, v, length = self.graph.edges[e]
            sub.add_edge(u, v, key=e, length=length)
        kept = set(key for _, _, key in nx.minimum_spanning_edges(sub, weight='length', keys=True, data=False))
        tree = nx.MultiGraph()
        for e in kept:
            u, v, _ = self.graph.edges[e]
            tree.add_edge(u, v, key=e)
        leaves = [x for x in tree.nodes if tree.degree(x) == 1 and x not in keep]
        while leaves:
            x = leaves.pop()
            if x not in tree or tree.degree(x) != 1:
                continue
            (_, y, key), = tree.edges(x, keys=True)
            kept.discard(key)
            tree.remove_node(x)
            if tree.degree(y) == 1 and y not in keep:
                leaves.append(y)
        return tuple(sorted(kept))


def dreyfusWagner(graph, terminals, edgeIds=None, cap=10):
    """ Optimal Steiner tree of ``terminals``.

    :return: ``(edges, length)``
    :rtype: tuple
    :raises ValueError: When the terminals are disconnected.
    """
    dw = DreyfusWagner(graph, terminals, edgeIds, cap)
    edges, length = dw.tree((1 << len(dw.terminals)) - 1)
    if edges is None:
        raise ValueError("Terminals {} are not connected".format(sorted(dw.terminals)))
    return edges, length


def bruteForcePcst(instance, maxTerminals=10):
    """ Optimal rooted prize-collecting Steiner tree.

    Runs one Dreyfus-Wagner table over the penalized vertices and minimises
    ``tree(U + r) + penalty(outside U)`` over every terminal subset ``U``.

    :raises InstanceTooLargeError: Above ``maxTerminals`` penalized vertices.
    :return: ``(solution, cost)``
    :rtype: tuple
    """
    terminals = list(instance.terminals())
    if len(terminals) > maxTerminals:
        raise InstanceTooLargeError("Brute-force tree oracle is capped at {} penalized vertices, got {}".format(
            maxTerminals, len(terminals)))
    dw = DreyfusWagner(instance.graph, terminals, cap=maxTerminals)
    root = instance.root
    penalties = [instance.vertexPenalties[t] for t in terminals]
    best = None
    for mask in range(1 << len(terminals)):
        length = dw.cost(mask, root)
        if length is None:
            continue
        cost = length + sum((p for i, p in enumerate(penalties) if not mask >> i & 1), Fraction(0))
        if best is None or cost < best[0]:
            best = (cost, mask)
    cost, mask = best
    keep = {terminals[i] for i in range(len(terminals)) if mask >> i & 1} | {root}
    edges = dw.clean(dw.edges(mask, root), keep)
    solution = evaluate(instance, edges)
    logger.debug("Brute-force tree optimum {} with {} of {} terminals".format(cost, len(keep) - 1, len(terminals)))
    return solution, solution.cost


def _edgeSubsetOptimum(instance, pairs):
    graph = instance.graph
    best = None
    for size in range(graph.edgeCount + 1):
        for edges in itertools.combinations(range(graph.edgeCount), size):
            length = graph.totalLength(edges)
            if best is not None and length >= best.cost:
                continue
            if not isAcyclic(graph, edges):
                continue
            solution = evaluate(instance, edges)
            if best is None or solution.cost < best.cost:
                best = solution
    return best


def _pairSubsetOptimum(instance, pairs, maxTerminals):
    graph = instance.graph
    terminals = sorted(set(x for i in pairs for x in (instance.pairs[i].s, instance.pairs[i].t)))
    dw = DreyfusWagner(graph, terminals, cap=maxTerminals)
    index = {t: i for i, t in enumerate(terminals)}
    h = len(pairs)

    def terminalMask(group):
        mask = 0
        for j in range(h):
            if group >> j & 1:
                pair = instance.pairs[pairs[j]]
                mask |= 1 << index[pair.s] | 1 << index[pair.t]
        return mask

    forest = {0: (Fraction(0), ())}
    for chosen in range(1, 1 << h):
        low = chosen & -chosen
        rest = chosen ^ low
        sub = rest
        while True:
            group = sub | low
            tree = dw.treeCost(terminalMask(group))
            remainder = forest.get(chosen ^ group)
            if tree is not None and remainder is not None:
                value = tree + remainder[0]
                if chosen not in forest or value < forest[chosen][0]:
                    forest[chosen] = (value, (group,) + remainder[1])
            if sub == 0:
                break
            sub = (sub - 1) & rest

    best = None
    for chosen, (value, groups) in forest.items():
        cost = value + sum((instance.pairs[pairs[j]].penalty for j in range(h) if not chosen >> j & 1), Fraction(0))
        if best is None or cost < best[0]:
            best = (cost, groups)
    edges = []
    for group in best[1]:
        groupEdges, _ = dw.tree(terminalMask(group))
        edges.extend(groupEdges)
    return evaluate(instance, spanningForest(graph, sorted(set(edges))))


def bruteForcePcsf(instance, maxEdges=16, maxPairs=6, maxTerminals=12, mode='auto'):
    """ Optimal prize-collecting Steiner forest of a small instance.

    ``'edges'`` mode enumerates acyclic edge subsets; ``'pairs'`` mode enumerates
    groupings of the connected pairs, each group served by one Dreyfus-Wagner tree.
    ``'auto'`` takes the first mode whose cap fits.

    :raises InstanceTooLargeError: When no mode fits its cap.
    :return: ``(solution, cost)``
    :rtype: tuple
    """
    if instance.mode == TREE:
        return bruteForcePcst(instance, maxTerminals=min(maxTerminals, 10))
    pairs = [i for i, p in enumerate(instance.pairs) if p.penalty > 0]
    if not pairs:
        solution = evaluate(instance, ())
        return solution, solution.cost
    if mode == 'auto':
        if instance.graph.edgeCount <= maxEdges:
            mode = 'edges'
        elif len(pairs) <= maxPairs:
            mode = 'pairs'
        else:
            raise InstanceTooLargeError("Brute-force forest oracle needs at most {} edges or {} pairs, got {} and {}".format(
                maxEdges, maxPairs, instance.graph.edgeCount, len(pairs)))
    if mode == 'edges':
        if instance.graph.edgeCount > maxEdges:
            raise InstanceTooLargeError("Edge enumeration is capped at {} edges, got {}".format(maxEdges, instance.graph.edgeCount))
        solution = _edgeSubsetOptimum(instance, pairs)
    elif mode == 'pairs':
        if len(pairs) > maxPairs:
            raise InstanceTooLargeError("Pair enumeration is capped at {} pairs, got {}".format(maxPairs, len(pairs)))
        solution = _pairSubsetOptimum(instance, pairs, maxTerminals)
    else:
        raise ValueError("Unknown brute-force mode '{}'".format(mode))
    logger.debug("Brute-force forest optimum {} ({} mode)".format(solution.cost, mode))
    return solution, solution.cost
