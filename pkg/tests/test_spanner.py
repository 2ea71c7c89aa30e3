# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

from fractions import Fraction

import pytest

from PCSteiner.Planar.GRAPH import RotationSystem, ValidationError, WeightedGraph, checkEmbedding
from PCSteiner.Planar.INSTANCE import FOREST, PcInstance
from PCSteiner.Planar.MORTAR import MortarGraph
from PCSteiner.Planar.SPANNER import (BudgetExceededError, SpannerBuilder, buildPortalConnected, buildSpanner,
                                      checkPortals, enumerateBricks, placePortals, restrictInstance)


@pytest.fixture
def square():
    """ Unit square 0-1-2-3 with the diagonal 0-2 drawn inside. """
    graph = WeightedGraph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1), (0, 2, 1)])
    rotation = RotationSystem([[0, 8, 7], [1, 2], [4, 9, 3], [5, 6]])
    return PcInstance(graph, FOREST, pairs=((1, 3, 1),), rotation=rotation)


@pytest.fixture
def frame():
    return MortarGraph((0, 1, 2, 3), (0, 1, 2), (3,), (), Fraction(4))


@pytest.fixture
def brick(square, frame):
    return enumerateBricks(square.graph, square.rotation, frame)[0]


def test_square_faces(square):
    assert square.rotation.faces() == ((0, 2, 4, 6), (1, 8, 3), (5, 9, 7))


def test_one_brick_around_the_diagonal(square, frame):
    bricks = enumerateBricks(square.graph, square.rotation, frame)
    assert len(bricks) == 1
    brick = bricks[0]
    assert brick.boundary == (1, 7, 5, 3)
    assert brick.labels == ('S', 'S', 'S', 'S')
    assert brick.interior == (4,)
    assert brick.strip is None
    assert brick.edges() == (0, 1, 2, 3, 4)
    assert brick.boundaryLength(square.graph) == 4


def test_full_mortar_leaves_no_bricks(square):
    everything = MortarGraph((0, 1, 2, 3, 4), (0, 1, 2), (3, 4), (), Fraction(5))
    assert enumerateBricks(square.graph, square.rotation, everything) == []


def test_portals_start_at_the_interior(square, brick):
    assert placePortals(brick, square.graph, 2) == (1, 3)
    assert brick.portalVertices(square.graph) == [0, 2]
    assert checkPortals(brick, square.graph, 2) == {'passed': True, 'brick': 0, 'count': 2, 'radius': 1,
                                                    'bound': 2, 'violations': []}


def test_single_portal(square, brick):
    assert placePortals(brick, square.graph, 1) == (1,)
    report = checkPortals(brick, square.graph, 1)
    assert report['passed']
    assert report['radius'] == 3


def test_too_many_portals_are_reported(square, brick):
    brick.portals = (0, 1, 2, 3)
    report = checkPortals(brick, square.graph, 2)
    assert not report['passed']
    assert report['violations'][0]['kind'] == 'count'


def test_theta_must_be_positive(square, brick):
    with pytest.raises(ValidationError):
        placePortals(brick, square.graph, 0)


def test_portal_connected_graph(square, frame, brick):
    placePortals(brick, square.graph, 2)
    connected = buildPortalConnected(square.graph, square.rotation, frame, [brick])
    assert connected.graph.n == 8
    assert connected.copyOf == (0, 1, 2, 3, 1, 0, 3, 2)
    assert connected.edgeOrigin == (0, 1, 2, 3, 0, 3, 2, 1, 4, None, None)
    assert connected.brickOf == (None,) * 4 + (0,) * 5 + (None, None)
    assert connected.portalEdges == (9, 10)
    assert connected.graph.edges[9] == (0, 5, 0)
    assert connected.graph.edges[10] == (2, 7, 0)
    assert connected.checkCopies(frame, [brick])['passed']
    report = checkEmbedding(connected.graph, connected.rotation)
    assert report['passed']
    assert report['faces'] == 5


def test_brick_trees_join_the_portals(square, brick):
    placePortals(brick, square.graph, 2)
    builder = SpannerBuilder(square, 1, 2)
    assert builder.brickTrees(brick) == {4}


def test_spanner_without_bricks(loopGadget):
    result = buildSpanner(loopGadget, (0, 1), 1, 2)
    assert result.bricks == []
    assert result.mortar.edges == (0, 1, 2)
    assert result.edges == (0, 1, 2)
    assert result.length == Fraction(7, 2)
    assert result.reports['outerLength'] == {'passed': True, 'value': 5, 'bound': 5}
    assert result.passed
    exported = result.toDict()
    assert exported['tree'] == [0, 1]
    assert exported['strips'][0]['north'] == [2]
    assert exported['spanner'] == {'edges': [0, 1, 2], 'length': '7/2'}


def test_spanner_contains_the_mortar(square):
    result = buildSpanner(square, (0, 1, 2), Fraction(1, 2), 2)
    assert {0, 1, 2} <= set(result.mortar.edges)
    assert set(result.mortar.edges) <= set(result.edges)
    assert set(result.edges) <= set(range(5))
    assert result.reports['outerLength']['value'] == 6


def test_theta_over_budget(loopGadget):
    with pytest.raises(BudgetExceededError):
        SpannerBuilder(loopGadget, 1, 9)
    with pytest.raises(BudgetExceededError) as error:
        SpannerBuilder(loopGadget, 1, 5, dwCap=4)
    assert error.value.estimate == 729


def test_epsilon_range(loopGadget):
    with pytest.raises(ValidationError):
        SpannerBuilder(loopGadget, 2, 2)


def test_restrict_instance(loopGadget):
    restricted, originalIds = restrictInstance(loopGadget, (0, 2))
    assert tuple(originalIds) == (0, 2)
    assert restricted.graph.edges == ((0, 1, Fraction(3, 2)), (0, 0, Fraction(1)))
    assert restricted.root == 0
