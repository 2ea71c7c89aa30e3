# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

import json
from fractions import Fraction

import pytest

from PCSteiner.Planar.CLUSTER import (ClusterRun, CyclicForestError, checkClusterLength, contractForest,
                                      exhaustedVertices, prune, runClustering, splitInstances, verifyClusterDual)
from PCSteiner.Planar.GRAPH import ValidationError, WeightedGraph


@pytest.fixture
def lopsided():
    """ A cheap tree and an expensive tree joined by one link of length 3. """
    graph = WeightedGraph(4, [(0, 1, Fraction(1, 2)), (1, 2, 3), (2, 3, 5)])
    return contractForest(graph, (0, 2), Fraction(1, 2))


def test_contract_path_trees(pathForest):
    contracted = contractForest(pathForest.graph, (2, 0), Fraction(1, 2))
    assert contracted.vertexMap == (0, 0, 1, 1)
    assert contracted.trees == {0: (0,), 1: (2,)}
    assert contracted.potentials == (2, 2)
    assert contracted.graph.edges == ((0, 1, Fraction(4)),)
    assert contracted.edgeOrigin == (1,)
    assert contracted.uncontract((0,)) == (0, 1, 2)


def test_contract_keeps_shortest_parallel_edge(triangle):
    graph, _ = triangle
    contracted = contractForest(graph, (0,), Fraction(1, 2))
    assert contracted.vertexMap == (0, 0, 1)
    assert contracted.edgeOrigin == (1,)
    assert contracted.potentials == (2, 0)


def test_contract_rejects_cycles(triangle):
    graph, _ = triangle
    with pytest.raises(CyclicForestError):
        contractForest(graph, (0, 1, 2), 1)


def test_contract_rejects_zero_epsilon(triangle):
    graph, _ = triangle
    with pytest.raises(ValidationError):
        contractForest(graph, (), 0)


def test_balanced_trees_meet_in_the_middle(pathForest):
    run = runClustering(contractForest(pathForest.graph, (0, 2), Fraction(1, 2)))
    assert run.tight == (0,)
    assert run.dual == {(0, 0): 2, (1, 1): 2}
    assert prune(run) == (0,)
    assert verifyClusterDual(run)['passed']
    assert checkClusterLength(run) == {'passed': True, 'length': 4, 'bound': 8}
    exported = run.toDict()
    assert exported['epsilon'] == '1/2'
    assert exported['prunedOriginal'] == [0, 1, 2]


def test_exhausted_tree_is_pruned(lopsided):
    run = runClustering(lopsided)
    assert run.tight == (0,)
    assert run.dual == {(0, 0): 1, (1, 1): 2, (1, 2): 8}
    assert [record.id for record in run.deactivated()] == [0, 2]
    assert prune(run) == ()
    assert verifyClusterDual(run)['passed']


def test_exhausted_vertices(lopsided):
    run = runClustering(lopsided)
    assert exhaustedVertices(run, ()) == set()
    assert exhaustedVertices(run, (0,)) == {0}


def test_overcharged_dual_is_reported(lopsided):
    run = runClustering(lopsided)
    run.dual[(0, 0)] += 1
    kinds = {violation['kind'] for violation in verifyClusterDual(run)['violations']}
    assert kinds == {'budget', 'component'}


def test_split_keeps_connected_pairs(pathForest):
    run = runClustering(contractForest(pathForest.graph, (0, 2), Fraction(1, 2)))
    prune(run)
    pieces, straddling = splitInstances(pathForest, run)
    assert straddling == []
    assert len(pieces) == 1
    piece = pieces[0]
    assert piece.treeEdges == (0, 1, 2)
    assert piece.vertices == frozenset(range(4))
    assert piece.pairIds == (0,)
    assert piece.instance.pairs == pathForest.pairs


def test_split_reports_straddling_pairs(pathForest):
    run = runClustering(contractForest(pathForest.graph, (0, 2), Fraction(1, 2)))
    run.pruned = ()
    pieces, straddling = splitInstances(pathForest, run)
    assert pieces == []
    assert straddling == [0]


def test_cluster_run_is_a_dataclass(lopsided):
    run = runClustering(lopsided)
    assert isinstance(run, ClusterRun)
    assert run.pruned is None
    assert run.toDict()['pruned'] is None


def test_cluster_run_exports_json(lopsided):
    run = runClustering(lopsided)
    run.pruned = prune(run)
    document = json.loads(run.toJson())
    assert document['epsilon'] == '1/2'
    assert document['tight'] == [0]
    assert document['pruned'] == []
    assert document['prunedOriginal'] == []
    assert document['supervertices'] == [{'id': 0, 'vertices': [0, 1], 'tree': [0], 'potential': '1'},
                                         {'id': 1, 'vertices': [2, 3], 'tree': [2], 'potential': '10'}]
