# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

from fractions import Fraction

import pytest

from PCSteiner.Planar.GRAPH import RotationSystem, ValidationError, WeightedGraph
from PCSteiner.Planar.INSTANCE import (FOREST, TREE, NotNormalizedError, Pair, PcInstance, baseEdges, evaluate,
                                       normalizeTerminals, sameInstance, toVertexForm)


@pytest.fixture
def path():
    return WeightedGraph(3, [(0, 1, 1), (1, 2, 2)])


def test_pair_with_equal_endpoints_is_rejected(path):
    with pytest.raises(ValidationError):
        PcInstance(path, FOREST, pairs=((1, 1, 3),))


def test_negative_penalty_is_rejected(path):
    with pytest.raises(ValidationError):
        PcInstance(path, FOREST, pairs=((0, 1, -1),))
    with pytest.raises(ValidationError):
        PcInstance(path, TREE, root=0, vertexPenalties=(0, -1, 0))


def test_tree_needs_a_root_and_no_pairs(path):
    with pytest.raises(ValidationError):
        PcInstance(path, TREE, vertexPenalties=(0, 1, 0))
    with pytest.raises(ValidationError):
        PcInstance(path, TREE, root=0, pairs=((0, 2, 1),))


def test_forest_takes_no_vertex_penalties(path):
    with pytest.raises(ValidationError):
        PcInstance(path, FOREST, vertexPenalties=(0, 1, 0))


def test_unknown_mode(path):
    with pytest.raises(ValidationError):
        PcInstance(path, 'steiner')


def test_tree_penalties_default_to_zero(path):
    instance = PcInstance(path, TREE, root=1)
    assert instance.vertexPenalties == (0, 0, 0)
    assert instance.terminals() == ()


def test_evaluate_single_edge(edgeTree):
    instance = edgeTree(6)
    assert evaluate(instance, []).cost == 6
    solution = evaluate(instance, [0])
    assert (solution.length, solution.penalty, solution.cost) == (2, 0, 2)


def test_evaluate_tree_charges_vertices_cut_off_from_root(path):
    instance = PcInstance(path, TREE, root=0, vertexPenalties=(5, 3, 4))
    assert evaluate(instance, [0]).cost == 1 + 4
    assert evaluate(instance, [1]).cost == 2 + 3 + 4
    assert evaluate(instance, [0, 1, 1]).cost == 3


def test_evaluate_forest_charges_separated_pairs(path):
    instance = PcInstance(path, FOREST, pairs=((0, 2, Fraction(7, 2)), (0, 1, 1)))
    assert evaluate(instance, [0]).cost == 1 + Fraction(7, 2)
    assert evaluate(instance, [0, 1]).penalty == 0


def test_evaluate_rejects_unknown_edges(path):
    instance = PcInstance(path, FOREST, pairs=((0, 2, 1),))
    with pytest.raises(ValidationError):
        evaluate(instance, [2])


def test_solution_to_dict(edgeTree):
    assert evaluate(edgeTree(6), [0]).toDict() == {'edges': [0], 'length': '2', 'penalty': '0', 'cost': '2'}


def test_normalized_forest_without_pendants(edgeForest):
    normalized = normalizeTerminals(edgeForest(3))
    assert normalized.normalized
    assert normalized.graph.n == 2
    assert normalized.pairs == (Pair(0, 1, Fraction(3)),)


def test_inner_terminal_gets_a_pendant(path):
    instance = PcInstance(path, FOREST, pairs=((1, 2, 4),))
    normalized = normalizeTerminals(instance)
    assert normalized.graph.n == 4
    assert normalized.graph.edges[2] == (1, 3, 0)
    assert normalized.pairs == (Pair(3, 2, Fraction(4)),)
    assert normalized.vertexOrigin == (0, 1, 2, 1)
    assert normalized.baseVertexCount == 3
    assert baseEdges(normalized, [0, 1, 2]) == (0, 1)


def test_shared_terminal_gets_one_pendant_per_pair(path):
    instance = PcInstance(path, FOREST, pairs=((0, 2, 1), (0, 1, 1)))
    normalized = normalizeTerminals(instance)
    degrees = [normalized.graph.degree(x) for pair in normalized.pairs for x in (pair.s, pair.t)]
    assert degrees == [1, 1, 1, 1]
    assert len(set(x for pair in normalized.pairs for x in (pair.s, pair.t))) == 4


def test_tree_encoding_round_trip(path):
    rotation = RotationSystem([[0], [1, 2], [3]])
    instance = PcInstance(path, TREE, root=0, vertexPenalties=(0, 2, 5), rotation=rotation)
    encoded = normalizeTerminals(instance)
    assert encoded.mode == FOREST
    assert len(encoded.pairs) == 2
    assert encoded.graph.n == 3 + 4
    assert evaluate(encoded, []).cost == 7
    assert sameInstance(toVertexForm(encoded), instance)


def test_vertex_form_needs_a_root(edgeForest):
    with pytest.raises(NotNormalizedError):
        toVertexForm(normalizeTerminals(edgeForest(1)))
