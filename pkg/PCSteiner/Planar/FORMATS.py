# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

'''
Instance and tree decomposition file formats

Two instance formats are supported: a JSON form carrying the rotation system, and
an extension of the DIMACS STP format with a ``PrizePairs`` section. Tree
decompositions use the PACE ``.td`` text format.
'''

import json
import logging
import os

from . import PCSteinerError
from .GRAPH import RotationSystem, WeightedGraph, ValidationError, toRational, formatRational
from .INSTANCE import FOREST, TREE, Pair, PcInstance
from .TD import TreeDecomposition

logger = logging.getLogger(__name__)

STP_MAGIC = "33D32945 STP File, STP Format Version 1.0"

formatExtensions = {
    '.json': 'json',
    '.stp': 'stp-ext',
}


class ParseError(PCSteinerError):
    """ Malformed input file.

    :param message: Description of the problem.
    :type message: str
    :param line: 1-based line number, if known.
    :type line: int, optional
    """
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = "line {}: {}".format(line, message)
        super().__init__(message)


def formatFromPath(path):
    """ Guesses the instance format from a file extension (``.json`` or ``.stp``). """
    extension = os.path.splitext(path)[1].lower()
    if extension not in formatExtensions:
        raise ParseError("Unknown instance file extension '{}'".format(extension))
    return formatExtensions[extension]


def parseInstance(data, format):
    """ Parses an instance from file content.

    :param data: File content.
    :type data: bytes or str
    :param format: ``'json'`` or ``'stp-ext'``.
    :type format: str
    :raises ParseError: On malformed syntax.
    :raises ValidationError: On negative lengths or penalties.
    :rtype: PcInstance
    """
    if isinstance(data, bytes):
        try:
            data = data.decode('utf-8')
        except UnicodeDecodeError as e:
            raise ParseError("Input is not UTF-8: {}".format(e))
    if format == 'json':
        return _parseJson(data)
    if format in ('stp', 'stp-ext'):
        return _parseStp(data)
    raise ParseError("Unsupported instance format '{}'".format(format))


def serializeInstance(instance, format):
    """ Serializes an instance, the inverse of :func:`parseInstance`.

    :rtype: str
    """
    if format == 'json':
        return _serializeJson(instance)
    if format in ('stp', 'stp-ext'):
        return _serializeStp(instance)
    raise ParseError("Unsupported instance format '{}'".format(format))


def readInstance(path, format=None):
    with open(path, 'rb') as f:
        return parseInstance(f.read(), format or formatFromPath(path))


def writeInstance(instance, path, format=None):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(serializeInstance(instance, format or formatFromPath(path)))


def _integer(value, what):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ParseError("{} must be an integer, got {!r}".format(what, value))
    try:
        return int(value)
    except ValueError:
        raise ParseError("{} must be an integer, got {!r}".format(what, value))


def _parseJson(text):
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno)
    if not isinstance(document, dict):
        raise ParseError("Top-level JSON value must be an object")
    if 'n' not in document or 'edges' not in document:
        raise ParseError("JSON instance needs 'n' and 'edges'")

    n = _integer(document['n'], 'n')
    edges = []
    for entry in document['edges']:
        if not isinstance(entry, list) or len(entry) != 3:
            raise ParseError("Edge entries are [u, v, length], got {!r}".format(entry))
        edges.append((_integer(entry[0], 'edge endpoint'), _integer(entry[1], 'edge endpoint'), toRational(entry[2])))
    graph = WeightedGraph(n, edges)

    rotation = None
    if document.get('rotation') is not None:
        rotation = RotationSystem(document['rotation'], document.get('outerFace'))

    common = {
        'rotation': rotation,
        'normalized': bool(document.get('normalized', False)),
        'vertexOrigin': tuple(document['origin']) if document.get('origin') is not None else None,
        'coords': tuple(tuple(toRational(x) for x in c) for c in document['coords']) if document.get('coords') else None,
        'name': document.get('name', ''),
    }
    if document.get('root') is not None and 'vertex_penalties' in document:
        penalties = [0] * n
        for entry in document['vertex_penalties']:
            if not isinstance(entry, list) or len(entry) != 2:
                raise ParseError("Vertex penalties are [v, penalty], got {!r}".format(entry))
            v = _integer(entry[0], 'penalized vertex')
            if not 0 <= v < n:
                raise ValidationError("Penalized vertex {} outside 0..{}".format(v, n - 1))
            penalties[v] = toRational(entry[1])
        return PcInstance(graph, TREE, root=_integer(document['root'], 'root'),
                          vertexPenalties=tuple(penalties), **common)

    pairs = []
    for entry in document.get('pairs', []):
        if not isinstance(entry, list) or len(entry) != 3:
            raise ParseError("Pair entries are [s, t, penalty], got {!r}".format(entry))
        pairs.append(Pair(_integer(entry[0], 'pair endpoint'), _integer(entry[1], 'pair endpoint'), toRational(entry[2])))
    root = _integer(document['root'], 'root') if document.get('root') is not None else None
    return PcInstance(graph, FOREST, pairs=tuple(pairs), root=root, **common)


def _serializeJson(instance):
    document = {'name': instance.name, 'n': instance.graph.n,
                'edges': [[u, v, formatRational(length)] for u, v, length in instance.graph.edges]}
    if instance.mode == TREE:
        document['root'] = instance.root
        document['vertex_penalties'] = [[v, formatRational(p)] for v, p in enumerate(instance.vertexPenalties) if p != 0]
    else:
        document['pairs'] = [[p.s, p.t, formatRational(p.penalty)] for p in instance.pairs]
        if instance.root is not None:
            document['root'] = instance.root
    if instance.rotation is not None:
        document['rotation'] = instance.rotation.toList()
        if instance.rotation.outerFace is not None:
            document['outerFace'] = instance.rotation.outerFace
    if instance.normalized:
        document['normalized'] = True
    if instance.vertexOrigin != tuple(range(instance.graph.n)):
        document['origin'] = list(instance.vertexOrigin)
    if instance.coords is not None:
        document['coords'] = [[formatRational(x) for x in c] for c in instance.coords]
    return json.dumps(document, indent=1) + "\n"


def _parseStp(text):
    lines = text.splitlines()
    if not lines or not lines[0].strip().upper().startswith("33D32945"):
        raise ParseError("Missing STP header '33D32945'", 1)

    n = None
    declaredEdges = None
    edges = []
    root = None
    prizes = {}
    pairs = []
    coords = {}
    rotation = {}
    name = ''
    section = None

    for number, raw in enumerate(lines[1:], start=2):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword = tokens[0].upper()
        if keyword == 'EOF':
            break
        if keyword == 'SECTION':
            if len(tokens) < 2:
                raise ParseError("SECTION without a name", number)
            section = tokens[1].upper()
            continue
        if keyword == 'END':
            section = None
            continue
        if section is None:
            raise ParseError("Statement outside a section: '{}'".format(line), number)

        try:
            if section == 'COMMENT':
                if keyword == 'NAME':
                    name = line.split(None, 1)[1].strip().strip('"') if len(tokens) > 1 else ''
            elif section == 'GRAPH':
                if keyword == 'NODES':
                    n = int(tokens[1])
                elif keyword == 'EDGES':
                    declaredEdges = int(tokens[1])
                elif keyword in ('E', 'A'):
                    if len(tokens) != 4:
                        raise ParseError("Edge lines are 'E u v length'", number)
                    edges.append((int(tokens[1]) - 1, int(tokens[2]) - 1, toRational(tokens[3])))
                else:
                    raise ParseError("Unknown Graph statement '{}'".format(tokens[0]), number)
            elif section == 'TERMINALS':
                if keyword == 'ROOT':
                    root = int(tokens[1]) - 1
                elif keyword == 'TP':
                    prizes[int(tokens[1]) - 1] = toRational(tokens[2])
                elif keyword == 'TERMINALS':
                    pass
                else:
                    raise ParseError("Unknown Terminals statement '{}'".format(tokens[0]), number)
            elif section == 'PRIZEPAIRS':
                if keyword == 'P':
                    if len(tokens) != 4:
                        raise ParseError("Pair lines are 'P s t penalty'", number)
                    pairs.append(Pair(int(tokens[1]) - 1, int(tokens[2]) - 1, toRational(tokens[3])))
                elif keyword != 'PAIRS':
                    raise ParseError("Unknown PrizePairs statement '{}'".format(tokens[0]), number)
            elif section == 'COORDINATES':
                if keyword == 'DD':
                    coords[int(tokens[1]) - 1] = (toRational(tokens[2]), toRational(tokens[3]))
            elif section == 'EMBEDDING':
                if keyword == 'R':
                    rotation[int(tokens[1]) - 1] = [int(d) for d in tokens[2:]]
                elif keyword != 'OUTERFACE':
                    raise ParseError("Unknown Embedding statement '{}'".format(tokens[0]), number)
                else:
                    rotation['outer'] = int(tokens[1])
        except (IndexError, ValueError) as e:
            raise ParseError("Could not read '{}', reason: {}".format(line, e), number)

    if n is None:
        raise ParseError("Missing 'Nodes' statement")
    if declaredEdges is not None and declaredEdges != len(edges):
        raise ParseError("Declared {} edges, found {}".format(declaredEdges, len(edges)))
    graph = WeightedGraph(n, edges)

    rotationSystem = None
    if rotation:
        outer = rotation.pop('outer', None)
        rotationSystem = RotationSystem([rotation.get(v, []) for v in range(n)], outer)
    coordList = None
    if coords:
        if len(coords) != n:
            raise ParseError("Coordinates given for {} of {} vertices".format(len(coords), n))
        coordList = tuple(coords[v] for v in range(n))

    if root is not None and not pairs:
        penalties = [0] * n
        for v, p in prizes.items():
            if not 0 <= v < n:
                raise ValidationError("Prize vertex {} outside 1..{}".format(v + 1, n))
            penalties[v] = p
        return PcInstance(graph, TREE, root=root, vertexPenalties=tuple(penalties),
                          rotation=rotationSystem, coords=coordList, name=name)
    return PcInstance(graph, FOREST, pairs=tuple(pairs), rotation=rotationSystem, coords=coordList, name=name)


def _serializeStp(instance):
    graph = instance.graph
    out = [STP_MAGIC, ""]
    out += ["SECTION Comment", 'Name "{}"'.format(instance.name), "END", ""]
    out += ["SECTION Graph", "Nodes {}".format(graph.n), "Edges {}".format(graph.edgeCount)]
    out += ["E {} {} {}".format(u + 1, v + 1, formatRational(length)) for u, v, length in graph.edges]
    out += ["END", ""]
    if instance.mode == TREE:
        prized = [(v, p) for v, p in enumerate(instance.vertexPenalties) if p != 0]
        out += ["SECTION Terminals", "Terminals {}".format(len(prized)), "Root {}".format(instance.root + 1)]
        out += ["TP {} {}".format(v + 1, formatRational(p)) for v, p in prized]
        out += ["END", ""]
    else:
        out += ["SECTION PrizePairs", "Pairs {}".format(len(instance.pairs))]
        out += ["P {} {} {}".format(p.s + 1, p.t + 1, formatRational(p.penalty)) for p in instance.pairs]
        out += ["END", ""]
    if instance.coords is not None:
        out += ["SECTION Coordinates"]
        out += ["DD {} {} {}".format(v + 1, formatRational(x), formatRational(y)) for v, (x, y) in enumerate(instance.coords)]
        out += ["END", ""]
    if instance.rotation is not None:
        out += ["SECTION Embedding"]
        if instance.rotation.outerFace is not None:
            out.append("OuterFace {}".format(instance.rotation.outerFace))
        out += ["R {} {}".format(v + 1, " ".join(str(d) for d in darts)).rstrip()
                for v, darts in enumerate(instance.rotation.rotation)]
        out += ["END", ""]
    out.append("EOF")
    return "\n".join(out) + "\n"


def writeTd(decomposition, vertexCount):
    """ Writes a tree decomposition in the PACE ``.td`` format (1-indexed bags and vertices). """
    bags = decomposition.bags
    out = ["s td {} {} {}".format(len(bags), max((len(b) for b in bags), default=0), vertexCount)]
    for i, bag in enumerate(bags):
        out.append(" ".join(["b", str(i + 1)] + [str(v + 1) for v in sorted(bag)]))
    for i, j in decomposition.treeEdges:
        out.append("{} {}".format(i + 1, j + 1))
    return "\n".join(out) + "\n"


def readTd(text):
    """ Reads a PACE ``.td`` tree decomposition.

    :return: The decomposition and the vertex count from the ``s`` line.
    :rtype: tuple
    """
    header = None
    bags = {}
    treeEdges = []
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == 'c':
            continue
        try:
            if tokens[0] == 's':
                if len(tokens) != 5 or tokens[1] != 'td':
                    raise ParseError("Solution line is 's td bags width n'", number)
                header = (int(tokens[2]), int(tokens[3]), int(tokens[4]))
            elif tokens[0] == 'b':
                bags[int(tokens[1]) - 1] = frozenset(int(v) - 1 for v in tokens[2:])
            else:
                if len(tokens) != 2:
                    raise ParseError("Tree edge lines hold two bag ids", number)
                treeEdges.append((int(tokens[0]) - 1, int(tokens[1]) - 1))
        except ValueError as e:
            raise ParseError("Could not read '{}', reason: {}".format(raw.strip(), e), number)
    if header is None:
        raise ParseError("Missing 's td' line")
    if sorted(bags) != list(range(header[0])):
        raise ParseError("Expected bags 1..{}, found {}".format(header[0], len(bags)))
    return TreeDecomposition(tuple(bags[i] for i in range(header[0])), tuple(treeEdges)), header[2]
