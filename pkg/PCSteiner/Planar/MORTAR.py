# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

'''
Splicing a planar graph open along a tree, strip and column decomposition, and
the mortar graph

The doubled Euler tour of the tree becomes the outer face of a new planar graph.
That face is cut into strips: each strip sits between a minimal subpath of the
current boundary that is not epsilon-short and the shortest path joining its
ends. Columns inside a strip reach back to that shortest path; the cheapest
residue class of columns joins the tree and the shortest paths in the mortar graph.
'''

import dataclasses
import logging
import math
from fractions import Fraction

import networkx as nx

from .GRAPH import (RotationSystem, ValidationError, WeightedGraph, connectivity, isAcyclic, pathToDarts,
                    shortestPathDarts, toRational)

logger = logging.getLogger(__name__)


class OuterFaceGraph:
    """ A graph spliced open along a tree.

    Tree edge ``p`` of the spliced graph is the ``p``-th dart of the Euler tour,
    running from corner copy ``p-1`` to corner copy ``p``. Non-tree edges follow in
    ascending original id, and vertices off the tree come after the corner copies.

    :param graph: The spliced graph.
    :type graph: WeightedGraph
    :param rotation: Its embedding, with the tour as outer face.
    :type rotation: RotationSystem
    :param copyOf: Original vertex of every spliced vertex.
    :type copyOf: tuple
    :param edgeOrigin: Original edge of every spliced edge.
    :type edgeOrigin: tuple
    :param tour: The Euler tour as original darts.
    :type tour: tuple
    :param walk: Outer face walk as spliced darts.
    :type walk: tuple
    """
    def __init__(self, graph, rotation, copyOf, edgeOrigin, tour, walk, treeEdges, root):
        self.graph = graph
        self.rotation = rotation
        self.copyOf = copyOf
        self.edgeOrigin = edgeOrigin
        self.tour = tour
        self.walk = walk
        self.treeEdges = treeEdges
        self.root = root

    @property
    def outerLength(self):
        return sum((self.graph.dartLength(d) for d in self.walk), Fraction(0))

    def dartOrigin(self, dart):
        """ Original dart behind a spliced dart. """
        e = dart >> 1
        if e < len(self.tour):
            return self.tour[e] ^ (dart & 1)
        return 2 * self.edgeOrigin[e] + (dart & 1)

    def originalEdges(self, darts):
        return sorted(set(self.edgeOrigin[d >> 1] for d in darts))


def spliceOpen(graph, rotation, treeEdges, terminals=(), root=None):
    """ Cuts the plane along a tree so that its doubled Euler tour bounds the outer face.

    :param graph: The graph.
    :type graph: WeightedGraph
    :param rotation: A planar embedding of ``graph``.
    :type rotation: RotationSystem
    :param treeEdges: Edge ids of a tree.
    :type treeEdges: iterable
    :param terminals: Vertices that must lie on the tree.
    :type terminals: iterable, optional
    :param root: Tour start vertex, defaults to the smallest tree vertex.
    :type root: int, optional
    :raises ValidationError: When the tree is empty, cyclic, disconnected or misses a terminal.
    :rtype: OuterFaceGraph
    """
    treeEdges = tuple(sorted(set(treeEdges)))
    if not treeEdges:
        raise ValidationError("Cannot splice along a tree without edges")
    if not isAcyclic(graph, treeEdges):
        raise ValidationError("Splice tree contains a cycle")
    treeVertices = sorted(set(x for e in treeEdges for x in graph.endpoints(e)))
    uf = connectivity(graph, treeEdges)
    if len(set(uf[v] for v in treeVertices)) != 1:
        raise ValidationError("Splice tree is disconnected")
    missing = sorted(set(terminals) - set(treeVertices))
    if missing:
        raise ValidationError("Terminals {} are not on the splice tree".format(missing))
    if root is None:
        root = treeVertices[0]
    elif root not in treeVertices:
        raise ValidationError("Root {} is not on the splice tree".format(root))

    treeRotation = rotation.restrict(treeEdges)
    start = treeRotation.rotation[root][0]
    tour = []
    d = start
    while True:
        tour.append(d)
        d = treeRotation.successor(d ^ 1)
        if d == start:
            break
    length = len(tour)
    cornerAfter = {tour[p] ^ 1: p for p in range(length)}

    inTree = set(treeEdges)
    sectors = [[] for _ in range(length)]
    cornerOfDart = {}
    for x in treeVertices:
        darts = rotation.rotation[x]
        first = next(i for i, d in enumerate(darts) if (d >> 1) in inTree)
        corner = None
        for i in range(len(darts)):
            d = darts[(first + i) % len(darts)]
            if (d >> 1) in inTree:
                corner = cornerAfter[d]
            else:
                sectors[corner].append(d)
                cornerOfDart[d] = corner

    offTree = [v for v in range(graph.n) if v not in set(treeVertices)]
    vertexOf = {v: length + i for i, v in enumerate(offTree)}
    copyOf = [graph.tail(tour[(p + 1) % length]) for p in range(length)] + offTree

    edges = []
    edgeOrigin = []
    for p in range(length):
        edges.append(((p - 1) % length, p, graph.dartLength(tour[p])))
        edgeOrigin.append(tour[p] >> 1)
    newEdge = {}
    for e in range(graph.edgeCount):
        if e in inTree:
            continue
        u, v, edgeLength = graph.edges[e]
        tail = cornerOfDart[2 * e] if 2 * e in cornerOfDart else vertexOf[u]
        head = cornerOfDart[2 * e + 1] if 2 * e + 1 in cornerOfDart else vertexOf[v]
        newEdge[e] = len(edges)
        edges.append((tail, head, edgeLength))
        edgeOrigin.append(e)

    def newDart(d):
        return 2 * newEdge[d >> 1] + (d & 1)

    spliced = WeightedGraph(length + len(offTree), edges)
    rotationList = []
    for p in range(length):
        rotationList.append([2 * p + 1] + [newDart(d) for d in sectors[p]] + [2 * ((p + 1) % length)])
    for v in offTree:
        rotationList.append([newDart(d) for d in rotation.rotation[v]])
    walk = tuple(2 * p + 1 for p in [0] + list(range(length - 1, 0, -1)))
    embedding = RotationSystem(rotationList)
    embedding = RotationSystem(rotationList, outerFace=embedding.faceOf(walk[0]))
    logger.debug("Spliced {} tree edges open, outer face has {} darts".format(len(treeEdges), length))
    return OuterFaceGraph(spliced, embedding, tuple(copyOf), tuple(edgeOrigin), tuple(tour), walk, treeEdges, root)


def isEpsShort(graph, darts, epsilon, nxGraph=None):
    """ True when every subpath of the walk is within ``1 + epsilon`` of the distance
    between its ends.

    :param graph: The graph holding the walk.
    :type graph: WeightedGraph
    :param darts: The walk as darts.
    :type darts: list
    :param epsilon: Slack.
    :type epsilon: Fraction
    :param nxGraph: Graph to measure distances in, defaults to all of ``graph``.
    :type nxGraph: networkx.MultiGraph, optional
    :rtype: bool
    """
    epsilon = toRational(epsilon)
    darts = list(darts)
    if not darts:
        return True
    if nxGraph is None:
        nxGraph = graph.toNetworkx()
    vertices = [graph.tail(darts[0])] + [graph.head(d) for d in darts]
    prefix = [Fraction(0)]
    for d in darts:
        prefix.append(prefix[-1] + graph.dartLength(d))
    for i, x in enumerate(vertices):
        distance = nx.single_source_dijkstra_path_length(nxGraph, x, weight='length')
        for j in range(i + 1, len(vertices)):
            if prefix[j] - prefix[i] > (1 + epsilon) * distance[vertices[j]]:
                return False
    return True


@dataclasses.dataclass
class Column:
    start: int
    darts: tuple
    length: Fraction


@dataclasses.dataclass
class Strip:
    """ Region between a south boundary taken from the outer walk and the shortest
    path ``north`` joining its ends, both running from ``x`` to ``y``.
    """
    index: int
    south: tuple
    north: tuple
    x: int
    y: int
    faces: frozenset
    edges: tuple
    southLength: Fraction
    northLength: Fraction
    columns: list = dataclasses.field(default_factory=list)
    k: int = None
    supercolumnClass: int = None

    def supercolumns(self):
        if self.k is None:
            return []
        return [column for i, column in enumerate(self.columns) if i % self.k == self.supercolumnClass]

    def supercolumnLength(self):
        return sum((column.length for column in self.supercolumns()), Fraction(0))

    def columnLength(self):
        return sum((column.length for column in self.columns), Fraction(0))


def _firstViolation(graph, nxGraph, walk, epsilon):
    m = len(walk)
    vertices = [graph.tail(d) for d in walk]
    prefix = [Fraction(0)]
    for i in range(2 * m):
        prefix.append(prefix[-1] + graph.dartLength(walk[i % m]))
    distances = {}
    for x in set(vertices):
        distances[x] = nx.single_source_dijkstra_path_length(nxGraph, x, weight='length')
    for span in range(1, m):
        for a in range(m):
            x, y = vertices[a], vertices[(a + span) % m]
            if prefix[a + span] - prefix[a] > (1 + epsilon) * distances[x][y]:
                return a, span
    return None


def _dualReach(rotation, faces, region, seeds, barriers):
    found = set(seeds)
    stack = list(seeds)
    while stack:
        f = stack.pop()
        for d in faces[f]:
            if (d >> 1) in barriers:
                continue
            g = rotation.faceOf(d ^ 1)
            if g in region and g not in found:
                found.add(g)
                stack.append(g)
    return found


def decomposeStrips(outer, epsilon):
    """ Peels strips off the outer walk until the walk is epsilon-short.

    The shortest non-epsilon-short subpath is taken, leftmost first. Distances are
    measured inside the region that is still being decomposed.

    :param outer: The spliced graph.
    :type outer: OuterFaceGraph
    :param epsilon: Slack, positive.
    :type epsilon: Fraction
    :rtype: list
    """
    epsilon = toRational(epsilon)
    if epsilon <= 0:
        raise ValidationError("Epsilon must be positive, got {}".format(epsilon))
    graph, rotation = outer.graph, outer.rotation
    faces = rotation.faces()
    region = set(range(len(faces))) - {rotation.faceOf(outer.walk[0])}
    walk = list(outer.walk)
    strips = []
    while region:
        regionEdges = set(d >> 1 for f in region for d in faces[f]) | set(d >> 1 for d in walk)
        nxGraph = graph.toNetworkx(regionEdges)
        found = _firstViolation(graph, nxGraph, walk, epsilon)
        if found is None:
            break
        a, span = found
        m = len(walk)
        south = tuple(walk[(a + i) % m] for i in range(span))
        x, y = graph.tail(south[0]), graph.head(south[-1])
        north = tuple(shortestPathDarts(graph, nxGraph, x, y))
        barriers = set(d >> 1 for d in walk) | set(d >> 1 for d in north)
        seeds = ({rotation.faceOf(d ^ 1) for d in south} | {rotation.faceOf(d) for d in north}) & region
        stripFaces = _dualReach(rotation, faces, region, seeds, barriers)
        if not stripFaces:
            logger.warning("Could not enclose a strip between {} and {}, reason: empty region".format(x, y))
            break
        stripEdges = set(d >> 1 for f in stripFaces for d in faces[f]) | set(d >> 1 for d in south + north)
        strip = Strip(len(strips), south, north, x, y, frozenset(stripFaces), tuple(sorted(stripEdges)),
                      sum((graph.dartLength(d) for d in south), Fraction(0)),
                      sum((graph.dartLength(d) for d in north), Fraction(0)))
        strips.append(strip)
        logger.debug("Strip {} from {} to {}: south {} north {}, {} faces".format(
            strip.index, x, y, strip.southLength, strip.northLength, len(stripFaces)))
        walk = [walk[(a + span + i) % m] for i in range(m - span)] + list(north)
        region -= stripFaces
    return strips


def columnClassCount(epsilon):
    """ Number of column classes, ``ceil((1/eps^2) * (1/eps + 1))``. """
    epsilon = toRational(epsilon)
    return math.ceil((1 / epsilon ** 2) * (1 / epsilon + 1))


def selectSupercolumns(outer, strip, epsilon):
    """ Chooses the columns of a strip and its cheapest column class.

    Walking the south boundary from ``x``, the next column starts at the first
    vertex whose distance along the boundary from the previous start exceeds
    ``epsilon`` times its distance to the north boundary. Columns are grouped by
    index modulo :func:`columnClassCount`.

    :return: ``(columns, supercolumns)``; the strip is updated in place.
    :rtype: tuple
    """
    epsilon = toRational(epsilon)
    graph = outer.graph
    nxStrip = graph.toNetworkx(strip.edges)
    sources = {strip.x, strip.y} | set(graph.head(d) for d in strip.north)
    distance, paths = nx.multi_source_dijkstra(nxStrip, sources, weight='length')

    vertices = [strip.x] + [graph.head(d) for d in strip.south]
    along = [Fraction(0)]
    for d in strip.south:
        along.append(along[-1] + graph.dartLength(d))
    columns = [Column(strip.x, (), Fraction(0))]
    last = 0
    for j in range(1, len(vertices)):
        v = vertices[j]
        if along[j] - along[last] > epsilon * distance[v]:
            darts = tuple(pathToDarts(graph, nxStrip, paths[v]))
            columns.append(Column(v, darts, distance[v]))
            last = j

    k = columnClassCount(epsilon)
    totals = [Fraction(0)] * k
    for i, column in enumerate(columns):
        totals[i % k] += column.length
    chosen = min(range(k), key=lambda c: (totals[c], c))
    strip.columns = columns
    strip.k = k
    strip.supercolumnClass = chosen
    return columns, strip.supercolumns()


@dataclasses.dataclass
class MortarGraph:
    """ Tree, strip shortest paths and supercolumns as edge ids of the original graph. """
    edges: tuple
    treeEdges: tuple
    northEdges: tuple
    supercolumnEdges: tuple
    length: Fraction

    def vertices(self, graph):
        return set(x for e in self.edges for x in graph.endpoints(e))


def buildMortar(graph, outer, strips):
    """ Maps the tree, the north boundaries and the supercolumns back onto ``graph``.

    :rtype: MortarGraph
    """
    north = set()
    supercolumns = set()
    for strip in strips:
        north.update(outer.originalEdges(strip.north))
        for column in strip.supercolumns():
            supercolumns.update(outer.originalEdges(column.darts))
    edges = tuple(sorted(set(outer.treeEdges) | north | supercolumns))
    mortar = MortarGraph(edges, tuple(outer.treeEdges), tuple(sorted(north)), tuple(sorted(supercolumns)),
                         graph.totalLength(edges))
    logger.debug("Mortar graph has {} edges of length {}".format(len(edges), mortar.length))
    return mortar


def _bound(value, bound):
    return {'passed': value <= bound, 'value': value, 'bound': bound}


def checkStripBoundaries(outer, strips, epsilon):
    """ Total south boundary length is at most ``(1/eps + 1)`` times the outer walk. """
    epsilon = toRational(epsilon)
    return _bound(sum((s.southLength for s in strips), Fraction(0)), (1 / epsilon + 1) * outer.outerLength)


def checkColumns(strips, epsilon):
    """ Per strip, the columns add up to at most its south length over epsilon. """
    epsilon = toRational(epsilon)
    violations = []
    for strip in strips:
        if strip.columnLength() > strip.southLength / epsilon:
            violations.append({'strip': strip.index, 'value': strip.columnLength(), 'bound': strip.southLength / epsilon})
    return {'passed': not violations, 'violations': violations}


def checkSupercolumns(outer, strips, epsilon):
    """ Every chosen class is at most a ``1/k`` share of its strip's columns and all
    supercolumns together are at most epsilon times the outer walk.
    """
    epsilon = toRational(epsilon)
    violations = []
    for strip in strips:
        if strip.k is not None and strip.supercolumnLength() * strip.k > strip.columnLength():
            violations.append({'strip': strip.index, 'value': strip.supercolumnLength(),
                               'bound': strip.columnLength() / strip.k})
    report = _bound(sum((s.supercolumnLength() for s in strips), Fraction(0)), epsilon * outer.outerLength)
    report['passed'] = report['passed'] and not violations
    report['violations'] = violations
    return report


def checkMortar(graph, outer, mortar, epsilon):
    """ Mortar length is at most ``(3/eps + eps)`` times the outer walk and the mortar
    covers every tree vertex.
    """
    epsilon = toRational(epsilon)
    report = _bound(mortar.length, (3 / epsilon + epsilon) * outer.outerLength)
    treeVertices = set(x for e in outer.treeEdges for x in graph.endpoints(e))
    missing = sorted(treeVertices - mortar.vertices(graph))
    report['missing'] = missing
    report['passed'] = report['passed'] and not missing
    return report
