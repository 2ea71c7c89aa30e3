# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

from itertools import combinations

import pytest

from PCSteiner.Planar.GEN import generate
from PCSteiner.Planar.GRAPH import InstanceTooLargeError, ValidationError, WeightedGraph
from PCSteiner.Planar.INSTANCE import FOREST, TREE, PcInstance
from PCSteiner.Planar.TD import (JOIN, DecompositionError, TreeDecomposition, contractEdges, exactTreewidth,
                                 heuristicDecomposition, makeNice, partitionEdges, verifyDecomposition, verifyNice)


def cycle(n):
    return WeightedGraph(n, [(v, (v + 1) % n, 1) for v in range(n)])


def path(n, length=1):
    return WeightedGraph(n, [(v, v + 1, length) for v in range(n - 1)])


@pytest.mark.parametrize("graph,width", [
    (WeightedGraph(4, [(u, v, 1) for u, v in combinations(range(4), 2)]), 3),
    (cycle(5), 2),
    (path(5), 1),
    (WeightedGraph(1), 0),
    (WeightedGraph(0), -1),
])
def test_exact_treewidth(graph, width):
    assert exactTreewidth(graph) == width


def test_exact_treewidth_is_capped():
    with pytest.raises(InstanceTooLargeError):
        exactTreewidth(path(11))


def test_heuristic_decomposition_is_valid():
    graph = generate('grid', seed=0, rows=3, cols=3).graph
    decomposition = heuristicDecomposition(graph)
    report = verifyDecomposition(graph, decomposition)
    assert report['passed']
    assert report['width'] >= exactTreewidth(graph)


def test_verify_decomposition_finds_uncovered_edge():
    decomposition = TreeDecomposition((frozenset([0, 1]), frozenset([2])), ((0, 1),))
    report = verifyDecomposition(path(3), decomposition)
    assert not report['passed']
    assert {'kind': 'edge', 'edge': 1} in report['violations']


def test_verify_decomposition_finds_broken_vertex_subtree():
    bags = (frozenset([0, 1]), frozenset([1, 2]), frozenset([0, 2]))
    report = verifyDecomposition(cycle(3), TreeDecomposition(bags, ((0, 1), (1, 2))))
    assert {'kind': 'connectivity', 'vertex': 0} in report['violations']


def test_make_nice():
    graph = generate('series-parallel', seed=2, steps=6).graph
    decomposition = heuristicDecomposition(graph)
    nice = makeNice(decomposition, 3)
    assert verifyNice(nice)['passed']
    assert 3 in nice.nodes[nice.root].bag
    assert nice.width == decomposition.width
    assert verifyDecomposition(graph, nice.asTreeDecomposition())['passed']


def test_make_nice_joins_branches():
    bags = (frozenset([0]), frozenset([0, 1]), frozenset([0, 2]))
    nice = makeNice(TreeDecomposition(bags, ((0, 1), (0, 2))), 0)
    assert nice.kindCounts()[JOIN] == 1
    assert verifyNice(nice)['passed']


def test_make_nice_rejects_cyclic_bag_graph():
    bags = (frozenset([0]), frozenset([0]), frozenset([0]))
    with pytest.raises(DecompositionError):
        makeNice(TreeDecomposition(bags, ((0, 1), (1, 2), (2, 0))), 0)


def test_partition_by_levels():
    partition = partitionEdges(path(4), 2)
    assert partition.classes == ((0, 2), (1,))
    assert partition.lengths == (2, 1)
    assert partition.selected == 1
    assert partition.selectedEdges == (1,)


def test_partition_needs_two_classes():
    with pytest.raises(ValidationError):
        partitionEdges(path(3), 1)


def test_contract_and_lift_tree():
    graph = path(3)
    instance = PcInstance(graph, TREE, root=0, vertexPenalties=(0, 2, 3))
    contraction = contractEdges(graph, [0], instance)
    assert contraction.graph.n == 2
    assert contraction.instance.vertexPenalties == (2, 3)
    assert contraction.lift([0]) == (0, 1)
    assert contraction.lift([]) == (0,)


def test_contract_forest_drops_merged_pairs():
    graph = path(3)
    instance = PcInstance(graph, FOREST, pairs=((0, 1, 4), (0, 2, 1)))
    contraction = contractEdges(graph, [0], instance)
    assert contraction.mergedPairs == (0,)
    assert contraction.pairOrigin == (1,)
    assert contraction.lift([], treeMode=False) == (0,)
