# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

from fractions import Fraction
from itertools import combinations

import pytest

from PCSteiner.Planar.GRAPH import (EmbeddingError, RotationSystem, ValidationError, WeightedGraph, checkEmbedding,
                                    edgeSubgraph, isAcyclic, planarRotation, rotationFromCoordinates,
                                    spanningForest, toJsonable, toRational)


def complete(n):
    return WeightedGraph(n, [(u, v, 1) for u, v in combinations(range(n), 2)])


@pytest.mark.parametrize("value,expected", [
    ("5/2", Fraction(5, 2)),
    ("2.5", Fraction(5, 2)),
    (" 3 ", Fraction(3)),
    (0.1, Fraction(1, 10)),
    (7, Fraction(7)),
])
def test_to_rational_is_exact(value, expected):
    assert toRational(value) == expected


@pytest.mark.parametrize("value", ["abc", "1/0", True, float('inf'), None])
def test_to_rational_rejects(value):
    with pytest.raises(ValidationError):
        toRational(value)


def test_graph_rejects_negative_length_and_bad_endpoint():
    with pytest.raises(ValidationError):
        WeightedGraph(2, [(0, 1, -1)])
    with pytest.raises(ValidationError):
        WeightedGraph(2, [(0, 2, 1)])


def test_multigraph_flag():
    assert not complete(3).isMultigraph
    assert WeightedGraph(2, [(0, 1, 1), (1, 0, 2)]).isMultigraph
    assert WeightedGraph(1, [(0, 0, 1)]).isMultigraph


def test_darts(triangle):
    graph, _ = triangle
    assert graph.tail(0) == 0 and graph.head(0) == 1
    assert graph.tail(5) == 0 and graph.head(5) == 2
    assert graph.darts(1) == (1, 2)
    assert graph.totalLength([0, 0, 1]) == 2


def test_triangle_faces(triangle):
    graph, rotation = triangle
    assert rotation.faces() == ((0, 2, 4), (1, 5, 3))
    report = checkEmbedding(graph, rotation)
    assert report['passed']
    assert report['faces'] == 2
    assert report['components'] == 1
    assert report['outerFaceLength'] == 3


def test_missing_dart_is_reported(triangle):
    graph, _ = triangle
    report = checkEmbedding(graph, RotationSystem([[0], [1, 2], [3, 4]]))
    assert not report['passed']
    assert report['violations'][0]['kind'] == 'rotation'
    assert report['violations'][0]['missing'] == [5]


def test_k4_is_planar():
    graph = complete(4)
    report = checkEmbedding(graph, planarRotation(graph))
    assert report['passed']
    assert report['faces'] == 4


def test_k5_is_not_planar():
    with pytest.raises(EmbeddingError):
        planarRotation(complete(5))


def test_planar_rotation_handles_parallel_edges_and_loops():
    graph = WeightedGraph(3, [(0, 1, 1), (0, 1, 2), (1, 2, 1), (2, 2, 1)])
    assert checkEmbedding(graph, planarRotation(graph))['passed']


def test_rotation_from_coordinates(triangle):
    graph, _ = triangle
    rotation = rotationFromCoordinates(graph, [(0, 0), (1, 0), (0, 1)])
    assert checkEmbedding(graph, rotation)['faces'] == 2


def test_edge_subgraph_renumbers(triangle):
    graph, rotation = triangle
    sub, subRotation, originalIds = edgeSubgraph(graph, [2, 0], rotation)
    assert originalIds == (0, 2)
    assert sub.edges == ((0, 1, 1), (2, 0, 1))
    assert subRotation.rotation == ((0, 3), (1,), (2,))


def test_spanning_forest_is_greedy(triangle):
    graph, _ = triangle
    assert spanningForest(graph, [2, 1, 0]) == [2, 1]
    assert not isAcyclic(graph, [0, 1, 2])
    assert isAcyclic(graph, [0, 2])


def test_to_jsonable():
    value = {'a': Fraction(1, 2), 'b': {2, 1}, 'c': (Fraction(3),)}
    assert toJsonable(value) == {'a': '1/2', 'b': [1, 2], 'c': ['3']}
