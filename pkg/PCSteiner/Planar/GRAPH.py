# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

'''
Weighted multigraphs, combinatorial embeddings and the graph helpers shared by
every other module.

Edges are identified by their position in the edge list. Every edge ``e = (u, v)``
has two darts (edge occurrences): ``2e`` leaves ``u`` and ``2e + 1`` leaves ``v``.
A rotation system lists, for every vertex, the darts leaving it in cyclic order.
'''

import logging
import math
from fractions import Fraction

import networkx as nx
from networkx.utils import UnionFind

from . import PCSteinerError

logger = logging.getLogger(__name__)


class ValidationError(PCSteinerError):
    """ Raised when a value violates an instance invariant (negative length, bad vertex id, ...). """


class EmbeddingError(PCSteinerError):
    """ Raised when a graph cannot be embedded or a rotation system is unusable. """


class InstanceTooLargeError(PCSteinerError):
    """ Raised when an exact routine is asked to run beyond its size cap. """


def toRational(value):
    """ Converts a value into an exact rational.

    Strings may hold integers, decimals (``"2.5"``) or fractions (``"5/2"``); they are
    parsed exactly. Floats are converted through their shortest repr.

    :param value: Value to convert.
    :type value: str, int, float or Fraction
    :return: The exact value.
    :rtype: Fraction

    """
    if isinstance(value, bool):
        raise ValidationError("Boolean is not a rational value: {}".format(value))
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValidationError("Non-finite value: {}".format(value))
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValidationError("Not a rational number: '{}'".format(value))
    raise ValidationError("Unsupported numeric type {}".format(type(value).__name__))


def formatRational(value):
    """ Returns the canonical text form of a rational (``"3/2"``, ``"2"``). """
    return str(Fraction(value))


def toJsonable(value):
    """ Nested copy of a report with every rational written as text. """
    if isinstance(value, Fraction):
        return formatRational(value)
    if isinstance(value, dict):
        return {k: toJsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [toJsonable(v) for v in items]
    return value


def dartEdge(dart):
    return dart >> 1


def reverseDart(dart):
    return dart ^ 1


class WeightedGraph:
    """ Undirected multigraph with nonnegative exact edge lengths.

    Parallel edges and loops are allowed. The graph is treated as immutable once built.

    :param n: Vertex count, vertices are ``0 .. n-1``.
    :type n: int
    :param edges: Iterable of ``(u, v, length)`` triples.
    :type edges: iterable
    """
    def __init__(self, n, edges=()):
        if n < 0:
            raise ValidationError("Vertex count must be nonnegative, got {}".format(n))
        self.n = n
        checked = []
        for index, (u, v, length) in enumerate(edges):
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError("Edge {} has an endpoint outside 0..{}: ({}, {})".format(index, n - 1, u, v))
            length = toRational(length)
            if length < 0:
                raise ValidationError("Edge {} has negative length {}".format(index, length))
            checked.append((int(u), int(v), length))
        self.edges = tuple(checked)

        darts = [[] for _ in range(n)]
        for e, (u, v, _) in enumerate(self.edges):
            darts[u].append(2 * e)
            darts[v].append(2 * e + 1)
        self.adjacency = tuple(tuple(d) for d in darts)

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return "WeightedGraph(n={}, m={})".format(self.n, len(self.edges))

    @property
    def edgeCount(self):
        return len(self.edges)

    @property
    def isMultigraph(self):
        seen = set()
        for u, v, _ in self.edges:
            key = (min(u, v), max(u, v))
            if u == v or key in seen:
                return True
            seen.add(key)
        return False

    def endpoints(self, e):
        u, v, _ = self.edges[e]
        return u, v

    def length(self, e):
        return self.edges[e][2]

    def tail(self, dart):
        return self.edges[dart >> 1][dart & 1]

    def head(self, dart):
        return self.edges[dart >> 1][1 - (dart & 1)]

    def dartLength(self, dart):
        return self.edges[dart >> 1][2]

    def other(self, e, x):
        u, v, _ = self.edges[e]
        return v if x == u else u

    def darts(self, v):
        """ Darts leaving ``v`` in edge-list order. """
        return self.adjacency[v]

    def degree(self, v):
        return len(self.adjacency[v])

    def incidentEdges(self, v):
        return tuple(sorted(set(d >> 1 for d in self.adjacency[v])))

    def totalLength(self, edgeIds):
        return sum((self.edges[e][2] for e in set(edgeIds)), Fraction(0))

    def edgesFromAdjacency(self):
        """ Rebuilds the edge list from the adjacency index. """
        ends = {}
        for v, darts in enumerate(self.adjacency):
            for d in darts:
                ends.setdefault(d >> 1, [None, None])[d & 1] = v
        return tuple((ends[e][0], ends[e][1], self.edges[e][2]) for e in sorted(ends))

    def edgesWithin(self, vertices):
        """ Edge ids with both endpoints in ``vertices`` (loops excluded). """
        vertices = set(vertices)
        found = set()
        for v in vertices:
            for d in self.adjacency[v]:
                e = d >> 1
                u, w, _ = self.edges[e]
                if u != w and u in vertices and w in vertices:
                    found.add(e)
        return tuple(sorted(found))

    def toNetworkx(self, edgeIds=None, vertices=None):
        """ Returns a :class:`networkx.MultiGraph` keyed by edge id with a ``length`` attribute.

        :param edgeIds: Restrict to these edges, defaults to all edges.
        :type edgeIds: iterable, optional
        :param vertices: Nodes to add even if isolated, defaults to all vertices.
        :type vertices: iterable, optional
        """
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.n) if vertices is None else vertices)
        ids = range(len(self.edges)) if edgeIds is None else sorted(set(edgeIds))
        for e in ids:
            u, v, length = self.edges[e]
            graph.add_edge(u, v, key=e, length=length)
        return graph


def edgeBetween(nxGraph, u, v):
    """ Cheapest edge id joining ``u`` and ``v`` in a keyed multigraph (lowest id on ties). """
    options = nxGraph[u][v]
    return min(options, key=lambda key: (options[key]['length'], key))


def pathToDarts(graph, nxGraph, nodes):
    """ Converts a node path into the darts it traverses. """
    darts = []
    for a, b in zip(nodes, nodes[1:]):
        e = edgeBetween(nxGraph, a, b)
        darts.append(2 * e if graph.edges[e][0] == a else 2 * e + 1)
    return darts


def shortestPathDarts(graph, nxGraph, source, target):
    """ Darts of a shortest ``source``-``target`` path in ``nxGraph``.

    :raises networkx.NetworkXNoPath: When the vertices are disconnected.
    """
    if source == target:
        return []
    nodes = nx.dijkstra_path(nxGraph, source, target, weight='length')
    return pathToDarts(graph, nxGraph, nodes)


def spanningForest(graph, edgeIds):
    """ Greedy acyclic subset of ``edgeIds``, scanning them in the given order. """
    uf = UnionFind()
    kept = []
    for e in edgeIds:
        u, v, _ = graph.edges[e]
        if u == v or uf[u] == uf[v]:
            continue
        uf.union(u, v)
        kept.append(e)
    return kept


def isAcyclic(graph, edgeIds):
    edgeIds = list(edgeIds)
    return len(set(edgeIds)) == len(edgeIds) and len(spanningForest(graph, edgeIds)) == len(edgeIds)


def connectivity(graph, edgeIds):
    """ Returns a :class:`networkx.utils.UnionFind` over all vertices joined by ``edgeIds``. """
    uf = UnionFind(range(graph.n))
    for e in edgeIds:
        u, v, _ = graph.edges[e]
        uf.union(u, v)
    return uf


class RotationSystem:
    """ Combinatorial embedding given as cyclic dart orders around every vertex.

    The face successor of a dart is the rotation successor of its reverse; face walks
    are the orbits of that permutation.

    :param rotation: Per-vertex sequences of dart ids.
    :type rotation: list
    :param outerFace: Designated outer face index, defaults to the longest face.
    :type outerFace: int, optional
    """
    def __init__(self, rotation, outerFace=None):
        self.rotation = tuple(tuple(int(d) for d in darts) for darts in rotation)
        self.outerFace = outerFace
        self._successor = {}
        for darts in self.rotation:
            for i, d in enumerate(darts):
                self._successor[d] = darts[(i + 1) % len(darts)]
        self._faces = None
        self._faceOf = None

    def __eq__(self, other):
        if not isinstance(other, RotationSystem):
            return NotImplemented
        return self.rotation == other.rotation and self.outerFace == other.outerFace

    def __hash__(self):
        return hash((self.rotation, self.outerFace))

    def __repr__(self):
        return "RotationSystem(vertices={})".format(len(self.rotation))

    def successor(self, dart):
        return self._successor[dart]

    def faceSuccessor(self, dart):
        return self._successor[dart ^ 1]

    def faces(self):
        """ Face walks as tuples of darts, each started at its smallest dart. """
        if self._faces is None:
            faces = []
            faceOf = {}
            for start in sorted(self._successor):
                if start in faceOf:
                    continue
                walk = []
                d = start
                while d not in faceOf:
                    faceOf[d] = len(faces)
                    walk.append(d)
                    d = self.faceSuccessor(d)
                faces.append(tuple(walk))
            self._faces = tuple(faces)
            self._faceOf = faceOf
        return self._faces

    def faceOf(self, dart):
        self.faces()
        return self._faceOf[dart]

    def outerFaceId(self, graph):
        faces = self.faces()
        if self.outerFace is not None:
            return self.outerFace
        if not faces:
            return None
        lengths = [sum((graph.dartLength(d) for d in walk), Fraction(0)) for walk in faces]
        return max(range(len(faces)), key=lambda i: (lengths[i], len(faces[i]), -i))

    def restrict(self, edgeIds):
        """ Rotation of the subgraph formed by ``edgeIds`` on the same vertex set. """
        keep = set(edgeIds)
        return RotationSystem([[d for d in darts if (d >> 1) in keep] for darts in self.rotation])

    def toList(self):
        return [list(darts) for darts in self.rotation]


def checkEmbedding(graph, rotation):
    """ Checks a rotation system against its graph.

    Every dart must appear exactly once in the rotation of its tail, and Euler's
    formula ``n - m + f = 2`` must hold in every connected component.

    :return: A dictionary containing:

    .. code-block:: text

        {
            "passed":True,
            "faces":2,
            "components":1,
            "outerFace":0,
            "outerFaceLength":Fraction(3),
            "outerFaceSize":3,
            "violations":[]
        }

    :rtype: dict

    """
    violations = []
    if len(rotation.rotation) != graph.n:
        violations.append({'kind': 'size', 'detail': "rotation covers {} vertices, graph has {}".format(len(rotation.rotation), graph.n)})
    for v in range(min(graph.n, len(rotation.rotation))):
        expected = set(graph.darts(v))
        listed = rotation.rotation[v]
        duplicates = sorted(d for d in set(listed) if listed.count(d) > 1)
        foreign = sorted(set(listed) - expected)
        missing = sorted(expected - set(listed))
        if duplicates or foreign or missing:
            violations.append({'kind': 'rotation', 'vertex': v, 'duplicates': duplicates,
                               'foreign': foreign, 'missing': missing})
    report = {'passed': False, 'faces': None, 'components': None, 'outerFace': None,
              'outerFaceLength': None, 'outerFaceSize': None, 'violations': violations}
    if violations:
        for violation in violations:
            logger.debug("Inconsistent rotation: {}".format(violation))
        return report

    faces = rotation.faces()
    uf = connectivity(graph, range(graph.edgeCount))
    counts = {}
    for v in range(graph.n):
        if graph.degree(v) == 0:
            continue
        entry = counts.setdefault(uf[v], [0, 0, 0, v])
        entry[0] += 1
    for u, _, _ in graph.edges:
        counts[uf[u]][1] += 1
    for walk in faces:
        counts[uf[graph.tail(walk[0])]][2] += 1
    for n, m, f, first in counts.values():
        if n - m + f != 2:
            violations.append({'kind': 'euler', 'vertex': first, 'characteristic': n - m + f})
    if sum(len(walk) for walk in faces) != 2 * graph.edgeCount:
        violations.append({'kind': 'faces', 'detail': 'face walks do not cover every edge side once'})

    outer = rotation.outerFaceId(graph)
    report.update({
        'passed': not violations,
        'faces': len(faces),
        'components': len(counts),
        'outerFace': outer,
        'outerFaceLength': None if outer is None else sum((graph.dartLength(d) for d in faces[outer]), Fraction(0)),
        'outerFaceSize': None if outer is None else len(faces[outer]),
    })
    return report


def planarRotation(graph):
    """ Best-effort planar embedding using the networkx left-right planarity test.

    Parallel edges are nested and loops are placed in a single corner.

    :raises EmbeddingError: When the graph is not planar.
    :rtype: RotationSystem
    """
    simple = nx.Graph()
    simple.add_nodes_from(range(graph.n))
    simple.add_edges_from((u, v) for u, v, _ in graph.edges if u != v)
    planar, embedding = nx.check_planarity(simple)
    if not planar:
        raise EmbeddingError("Graph is not planar")

    between = {}
    loops = {}
    for e, (u, v, _) in enumerate(graph.edges):
        if u == v:
            loops.setdefault(u, []).extend([2 * e, 2 * e + 1])
        else:
            between.setdefault((u, v), []).append(2 * e)
            between.setdefault((v, u), []).append(2 * e + 1)

    rotation = []
    for v in range(graph.n):
        darts = []
        if v in embedding and embedding.degree(v) > 0:
            for w in embedding.neighbors_cw_order(v):
                parallel = sorted(between.get((v, w), []))
                darts.extend(parallel if v < w else reversed(parallel))
        darts.extend(loops.get(v, []))
        rotation.append(darts)
    return RotationSystem(rotation)


def rotationFromCoordinates(graph, coords):
    """ Rotation of a straight-line drawing: darts sorted counterclockwise by angle.

    :param coords: One ``(x, y)`` pair per vertex.
    :type coords: list
    :rtype: RotationSystem
    """
    rotation = []
    for v in range(graph.n):
        x0, y0 = coords[v]

        def angle(d):
            x1, y1 = coords[graph.head(d)]
            return (math.atan2(float(y1) - float(y0), float(x1) - float(x0)), d)

        rotation.append(sorted(graph.darts(v), key=angle))
    return RotationSystem(rotation)


def edgeSubgraph(graph, edgeIds, rotation=None):
    """ Renumbered subgraph on the same vertices, keeping only ``edgeIds``.

    :return: ``(subgraph, rotation or None, originalIds)`` where ``originalIds[j]``
        is the id in ``graph`` of subgraph edge ``j``.
    :rtype: tuple
    """
    originalIds = tuple(sorted(set(edgeIds)))
    newId = {e: j for j, e in enumerate(originalIds)}
    sub = WeightedGraph(graph.n, [graph.edges[e] for e in originalIds])
    subRotation = None
    if rotation is not None:
        subRotation = RotationSystem([[2 * newId[d >> 1] + (d & 1) for d in darts if (d >> 1) in newId]
                                      for darts in rotation.rotation])
    return sub, subRotation, originalIds
