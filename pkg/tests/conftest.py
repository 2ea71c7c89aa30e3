# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

from fractions import Fraction

import pytest

from PCSteiner.Planar.GRAPH import RotationSystem, WeightedGraph
from PCSteiner.Planar.INSTANCE import FOREST, TREE, PcInstance


@pytest.fixture
def triangle():
    """ Unit triangle, counterclockwise embedding. """
    graph = WeightedGraph(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)])
    return graph, RotationSystem([[0, 5], [1, 2], [3, 4]])


@pytest.fixture
def edgeTree():
    """ Factory for a single edge rooted at 0 with one penalized leaf. """
    def build(penalty, length=2):
        graph = WeightedGraph(2, [(0, 1, length)])
        return PcInstance(graph, TREE, root=0, vertexPenalties=(0, penalty), rotation=RotationSystem([[0], [1]]))
    return build


@pytest.fixture
def edgeForest():
    def build(penalty, length=2):
        graph = WeightedGraph(2, [(0, 1, length)])
        return PcInstance(graph, FOREST, pairs=((0, 1, penalty),), rotation=RotationSystem([[0], [1]]))
    return build


@pytest.fixture
def pathForest():
    """ Path 0-1-2-3 with a cheap, an expensive and a cheap edge, one end-to-end pair. """
    graph = WeightedGraph(4, [(0, 1, 1), (1, 2, 4), (2, 3, 1)])
    return PcInstance(graph, FOREST, pairs=((0, 3, 20),), rotation=RotationSystem([[0], [1, 2], [3, 4], [5]]))


@pytest.fixture
def loopGadget():
    """ Tree 1-0-2 with a loop at 0 that lies between the two tree edges.

    Spliced open along the tree, the loop becomes a chord of the outer walk that
    cuts off exactly one strip for epsilon 1.
    """
    graph = WeightedGraph(3, [(0, 1, Fraction(3, 2)), (0, 2, 1), (0, 0, 1)])
    rotation = RotationSystem([[0, 4, 2, 5], [1], [3]])
    return PcInstance(graph, TREE, root=0, vertexPenalties=(0, 1, 1), rotation=rotation)
