# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

from fractions import Fraction

import pytest

from PCSteiner.Planar.GRAPH import ValidationError
from PCSteiner.Planar.MORTAR import (buildMortar, checkColumns, checkMortar, checkStripBoundaries, checkSupercolumns,
                                     columnClassCount, decomposeStrips, isEpsShort, selectSupercolumns, spliceOpen)


@pytest.fixture
def spliced(loopGadget):
    return spliceOpen(loopGadget.graph, loopGadget.rotation, (0, 1))


def test_splice_follows_the_tour(spliced):
    assert spliced.tour == (0, 1, 2, 3)
    assert spliced.copyOf == (1, 0, 2, 0)
    assert spliced.edgeOrigin == (0, 0, 1, 1, 2)
    assert spliced.graph.edges[4] == (1, 3, Fraction(1))
    assert spliced.walk == (1, 7, 5, 3)
    assert spliced.outerLength == 5


def test_splice_embedding_has_the_tour_outside(spliced):
    faces = spliced.rotation.faces()
    assert faces == ((0, 2, 8), (1, 7, 5, 3), (4, 6, 9))
    assert spliced.rotation.outerFaceId(spliced.graph) == 1


def test_dart_origin(spliced):
    assert spliced.dartOrigin(1) == 1
    assert spliced.dartOrigin(8) == 4
    assert spliced.originalEdges([8, 1, 0]) == [0, 2]


@pytest.mark.parametrize("tree, kwargs", [
    ((), {}),
    ((0, 1, 2), {}),
    ((0,), {'terminals': (2,)}),
    ((0,), {'root': 2}),
])
def test_splice_rejects_bad_trees(loopGadget, tree, kwargs):
    with pytest.raises(ValidationError):
        spliceOpen(loopGadget.graph, loopGadget.rotation, tree, **kwargs)


def test_splice_rejects_disconnected_tree(pathForest):
    with pytest.raises(ValidationError):
        spliceOpen(pathForest.graph, pathForest.rotation, (0, 2))


def test_eps_short(spliced):
    assert isEpsShort(spliced.graph, (), 1)
    assert not isEpsShort(spliced.graph, (3, 1), 1)
    assert isEpsShort(spliced.graph, (3, 1), 2)


def test_column_class_count():
    assert columnClassCount(1) == 2
    assert columnClassCount(Fraction(1, 2)) == 12
    assert columnClassCount("1/3") == 36


def test_one_strip_behind_the_loop(spliced):
    strips = decomposeStrips(spliced, 1)
    assert len(strips) == 1
    strip = strips[0]
    assert strip.south == (3, 1)
    assert strip.north == (8,)
    assert (strip.x, strip.y) == (1, 3)
    assert strip.faces == frozenset([0])
    assert strip.edges == (0, 1, 4)
    assert strip.southLength == 3
    assert strip.northLength == 1


def test_generous_epsilon_needs_no_strips(spliced):
    assert decomposeStrips(spliced, 3) == []


def test_strips_need_positive_epsilon(spliced):
    with pytest.raises(ValidationError):
        decomposeStrips(spliced, 0)


def test_columns_and_mortar(loopGadget, spliced):
    strips = decomposeStrips(spliced, 1)
    columns, supercolumns = selectSupercolumns(spliced, strips[0], 1)
    assert [column.start for column in columns] == [1, 3]
    assert all(column.length == 0 for column in columns)
    assert strips[0].k == 2
    assert supercolumns == [columns[0]]

    mortar = buildMortar(loopGadget.graph, spliced, strips)
    assert mortar.edges == (0, 1, 2)
    assert mortar.northEdges == (2,)
    assert mortar.supercolumnEdges == ()
    assert mortar.length == Fraction(7, 2)
    assert mortar.vertices(loopGadget.graph) == {0, 1, 2}

    assert checkStripBoundaries(spliced, strips, 1) == {'passed': True, 'value': 3, 'bound': 10}
    assert checkColumns(strips, 1)['passed']
    assert checkSupercolumns(spliced, strips, 1)['passed']
    report = checkMortar(loopGadget.graph, spliced, mortar, 1)
    assert report['passed']
    assert report['missing'] == []
    assert report['bound'] == 20


def test_mortar_must_cover_the_tree(loopGadget, spliced):
    strips = decomposeStrips(spliced, 1)
    selectSupercolumns(spliced, strips[0], 1)
    mortar = buildMortar(loopGadget.graph, spliced, strips)
    mortar.edges = (2,)
    assert checkMortar(loopGadget.graph, spliced, mortar, 1)['missing'] == [1, 2]
