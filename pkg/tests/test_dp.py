# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

import pytest

from PCSteiner.Planar.DP import (Partition, PcstDynamicProgram, bellNumber, coarserPartitions, joinPartitions,
                                 partitionsBetween, solvePcst)
from PCSteiner.Planar.GEN import generate
from PCSteiner.Planar.GRAPH import WeightedGraph
from PCSteiner.Planar.INSTANCE import TREE, PcInstance, evaluate
from PCSteiner.Planar.STEINER import bruteForcePcst
from PCSteiner.Planar.TD import DecompositionError, heuristicDecomposition, makeNice


@pytest.mark.parametrize("k,expected", [(0, 1), (1, 1), (2, 2), (3, 5), (4, 15), (5, 52)])
def test_bell_numbers(k, expected):
    assert bellNumber(k) == expected


def test_partition_join():
    first = Partition.of([[1], [3, 2]])
    second = Partition.of([[2, 1], [3]])
    assert first.parts == ((1,), (2, 3))
    assert joinPartitions(first, second) == Partition.of([[1, 2, 3]])
    assert first.refines(joinPartitions(first, second))
    assert not first.refines(second)


def test_partition_helpers():
    partition = Partition.of([[0], [1], [2, 3]])
    assert partition.mergeVertex(4, [1, 2]) == Partition.of([[0], [1, 2, 3, 4]])
    assert partition.hasOnePerPart([0, 1, 2])
    assert not partition.hasOnePerPart([2, 3])


def test_coarser_partitions_count_bell_numbers():
    singletons = Partition.of([[0], [1], [2]])
    assert len(set(coarserPartitions(singletons))) == 5
    coarse = Partition.of([[0, 1], [2]])
    assert len(list(partitionsBetween(singletons, coarse))) == 2


def solveExactly(instance):
    nice = makeNice(heuristicDecomposition(instance.graph), instance.root)
    return PcstDynamicProgram(instance, nice)


def test_single_edge(edgeTree):
    tree, cost = solveExactly(edgeTree(6)).solve()
    assert cost == 2
    assert tree.edges == (0,)
    tree, cost = solveExactly(edgeTree(1)).solve()
    assert cost == 1
    assert tree.edges == ()


def test_triangle_takes_two_edges():
    graph = WeightedGraph(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)])
    instance = PcInstance(graph, TREE, root=0, vertexPenalties=(0, 5, 5))
    tree, cost = solveExactly(instance).solve()
    assert cost == 2
    assert len(tree.edges) == 2


@pytest.mark.parametrize("kind,seed,params", [
    ('grid', 0, {'rows': 2, 'cols': 3}),
    ('grid', 1, {'rows': 3, 'cols': 3}),
    ('series-parallel', 2, {'steps': 6}),
    ('series-parallel', 5, {'steps': 5}),
    ('ring-chords', 3, {'size': 7, 'chords': 2}),
])
def test_matches_brute_force(kind, seed, params):
    instance = generate(kind, seed=seed, mode=TREE, terminals=4, **params)
    program = solveExactly(instance)
    tree, cost = program.solve()
    _, optimum = bruteForcePcst(instance)
    assert cost == optimum
    assert evaluate(instance, tree.edges).cost == cost


def test_stats_and_dump(edgeTree):
    program = solveExactly(edgeTree(6))
    program.solve()
    stats = program.stats()
    assert stats['maxBag'] == 2
    assert stats['bell'] == 2
    assert stats['entries'] == sum(len(t) for t in program.tables.values())
    assert program.dump()


def test_root_outside_root_bag(edgeTree):
    from PCSteiner.Planar.TD import NiceNode, NiceTreeDecomposition, LEAF
    nice = NiceTreeDecomposition((NiceNode(LEAF, frozenset()),), 0)
    with pytest.raises(DecompositionError):
        solvePcst(edgeTree(6), nice)
