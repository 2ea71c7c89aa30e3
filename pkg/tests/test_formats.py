# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

import json
from fractions import Fraction

import pytest

from PCSteiner.Planar.FORMATS import (ParseError, formatFromPath, parseInstance, readInstance, readTd,
                                      serializeInstance, writeInstance, writeTd)
from PCSteiner.Planar.GEN import generate
from PCSteiner.Planar.GRAPH import ValidationError
from PCSteiner.Planar.INSTANCE import FOREST, TREE, Pair, sameInstance
from PCSteiner.Planar.TD import TreeDecomposition

STP_TREE = """33D32945 STP File, STP Format Version 1.0

SECTION Comment
Name "path"
END

SECTION Graph
Nodes 3
Edges 2
E 1 2 3/2
E 2 3 1   # second edge
END

SECTION Terminals
Terminals 1
Root 1
TP 3 5
END

SECTION Embedding
R 1 0
R 2 1 2
R 3 3
END

EOF
"""


def test_format_from_path():
    assert formatFromPath("a/b.JSON") == 'json'
    assert formatFromPath("x.stp") == 'stp-ext'
    with pytest.raises(ParseError):
        formatFromPath("x.txt")


def test_parse_json_forest():
    document = {'n': 3, 'edges': [[0, 1, "1/2"], [1, 2, 2]], 'pairs': [[0, 2, "3"]], 'name': 'p'}
    instance = parseInstance(json.dumps(document), 'json')
    assert instance.mode == FOREST
    assert instance.graph.length(0) == Fraction(1, 2)
    assert instance.pairs == (Pair(0, 2, Fraction(3)),)
    assert instance.name == 'p'
    assert instance.rotation is None


def test_parse_json_tree():
    document = {'n': 2, 'edges': [[0, 1, 1]], 'root': 1, 'vertex_penalties': [[0, "5/2"]]}
    instance = parseInstance(json.dumps(document).encode('utf-8'), 'json')
    assert instance.mode == TREE
    assert instance.root == 1
    assert instance.vertexPenalties == (Fraction(5, 2), 0)


def test_json_syntax_error_has_a_line():
    with pytest.raises(ParseError) as error:
        parseInstance('{\n"n": 2,\n"edges": [\n', 'json')
    assert error.value.line is not None
    assert str(error.value).startswith("line ")


def test_json_needs_graph_keys():
    with pytest.raises(ParseError):
        parseInstance('{"n": 2}', 'json')


def test_json_negative_length_is_a_validation_error():
    with pytest.raises(ValidationError):
        parseInstance('{"n": 2, "edges": [[0, 1, -1]]}', 'json')


def test_parse_stp_tree():
    instance = parseInstance(STP_TREE, 'stp-ext')
    assert instance.name == 'path'
    assert instance.mode == TREE
    assert instance.root == 0
    assert instance.vertexPenalties == (0, 0, 5)
    assert instance.graph.edges == ((0, 1, Fraction(3, 2)), (1, 2, Fraction(1)))
    assert instance.rotation.rotation == ((0,), (1, 2), (3,))


def test_parse_stp_prize_pairs():
    text = STP_TREE.replace("SECTION Terminals\nTerminals 1\nRoot 1\nTP 3 5\nEND",
                            "SECTION PrizePairs\nPairs 1\nP 1 3 4\nEND")
    instance = parseInstance(text, 'stp-ext')
    assert instance.mode == FOREST
    assert instance.pairs == (Pair(0, 2, Fraction(4)),)


def test_stp_missing_header():
    with pytest.raises(ParseError) as error:
        parseInstance("SECTION Graph\nNodes 1\nEND\nEOF\n", 'stp-ext')
    assert error.value.line == 1


def test_stp_edge_count_mismatch():
    with pytest.raises(ParseError):
        parseInstance(STP_TREE.replace("Edges 2", "Edges 3"), 'stp-ext')


def test_stp_bad_statement_reports_line():
    with pytest.raises(ParseError) as error:
        parseInstance(STP_TREE.replace("E 2 3 1", "Q 2 3 1"), 'stp-ext')
    assert error.value.line == 11


@pytest.mark.parametrize("format", ['json', 'stp-ext'])
def test_serialize_round_trip(format):
    instance = generate('grid', seed=3, mode=TREE, terminals=2, rows=2, cols=3)
    parsed = parseInstance(serializeInstance(instance, format), format)
    assert sameInstance(parsed, instance)
    assert parsed.name == instance.name


def test_read_and_write_files(tmp_path):
    instance = generate('series-parallel', seed=1, pairs=2, steps=4)
    path = str(tmp_path / "sp.stp")
    writeInstance(instance, path)
    assert sameInstance(readInstance(path), instance)


def test_td_round_trip():
    decomposition = TreeDecomposition((frozenset([0, 1]), frozenset([1, 2])), ((0, 1),))
    text = writeTd(decomposition, 3)
    assert text.splitlines()[0] == "s td 2 2 3"
    parsed, n = readTd(text)
    assert n == 3
    assert parsed == decomposition


def test_td_needs_header():
    with pytest.raises(ParseError):
        readTd("b 1 1 2\n")
